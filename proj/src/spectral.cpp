// Spectral layer: table ingestion, the residue gamma-factor R(y), and the
// theorem's discrete-spectrum expansion of the fourth-moment transform.
//
// R(y) = sqrt(pi/2) (2^{-iy} G(1/4 - iy/2)/G(1/4 + iy/2))^3 G(2iy) cosh(pi y).
// The middle ratio is unimodular for real y (conjugate gammas), so
// |R(y)| = sqrt(pi/2) |G(2iy)| cosh(pi y)
//        = (pi/2) sqrt(coth(pi y) / (2y))            -> (pi/(2 sqrt 2)) y^{-1/2},
// using |G(it)|^2 = pi/(t sinh(pi t)). G(2iy) alone underflows and cosh(pi y)
// overflows near |y| ~ 226, hence the mandatory log-space composition: the
// value is assembled as exp(sum of log factors), never as a direct product.
//
// Spectral terms pair s^{-i k} R(k) G(1/2 + ik) with s^{+i k} R(-k) G(1/2 - ik).
// All factors satisfy f(-k) = conj(f(k)) for real k (Schwarz reflection), so
// for real s each pair is 2 Re(...) and the sum is real up to rounding. The
// term envelope is |R(k) G(1/2 + ik)| ~ k^{-1/2} e^{-pi k / 2} sqrt(2 pi)
// against |s^{-ik}| = e^{k arg s}, giving geometric decay at rate
// exp(-(pi/2 - |arg s|) k): convergent throughout |arg s| < pi/2.

#include "zl/spectral.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <complex>
#include <istream>
#include <string>
#include <vector>

#include "zl/closed_forms.hpp"
#include "zl/constants.hpp"
#include "zl/errors.hpp"
#include "zl/special.hpp"
#include "zl/transforms.hpp"

namespace zl {

namespace {

// log cosh(pi y) without overflow: pi|y| - log 2 + log1p(e^{-2 pi |y|}).
double log_cosh_pi(double y) {
    double a = PI * std::fabs(y);
    return a - std::log(2.0) + std::log1p(std::exp(-2.0 * a));
}

Cplx log_r(double y) {
    const Cplx i(0.0, 1.0);
    Cplx ratio = -i * (y * std::log(2.0)) + log_gamma(Cplx(0.25, -0.5 * y)) -
                 log_gamma(Cplx(0.25, 0.5 * y));
    return 0.5 * std::log(0.5 * PI) + 3.0 * ratio +
           log_gamma(Cplx(0.0, 2.0 * y)) + log_cosh_pi(y);
}

void require_region(const Cplx& s, const char* who) {
    double m = std::abs(s);
    if (!std::isfinite(s.real()) || !std::isfinite(s.imag()) || !(m > 0.0) ||
        m > 1.0 || s.real() <= 0.0 || std::fabs(std::arg(s)) >= PI / 2.0) {
        throw DomainError(std::string(who) +
                          ": s outside 0 < |s| <= 1, |arg s| < pi/2");
    }
}

constexpr double kKappaMatchTol = 1e-9;

}  // namespace

SpectralTable parse_spectral_table(std::istream& in) {
    std::string line;
    std::vector<SpectralDatum> raw;
    int lineno = 0;
    auto is_space = [](char c) { return c == ' ' || c == '\t' || c == '\r'; };
    auto fail = [](int n, const std::string& what) {
        throw ParseError("spectral table line " + std::to_string(n) + ": " +
                         what);
    };
    while (std::getline(in, line)) {
        ++lineno;
        if (auto hash = line.find('#'); hash != std::string::npos)
            line.erase(hash);
        std::size_t lo = 0, hi = line.size();
        while (lo < hi && is_space(line[lo])) ++lo;
        while (hi > lo && is_space(line[hi - 1])) --hi;
        if (lo == hi) continue;

        std::size_t comma = line.find(',', lo);
        if (comma == std::string::npos || comma >= hi)
            fail(lineno, "expected 'kappa,weight'");
        auto field = [&](std::size_t a, std::size_t b, double* out) {
            while (a < b && is_space(line[a])) ++a;
            while (b > a && is_space(line[b - 1])) --b;
            auto res = std::from_chars(line.data() + a, line.data() + b, *out);
            if (a == b || res.ec != std::errc() || res.ptr != line.data() + b ||
                !std::isfinite(*out))
                fail(lineno, "malformed number '" + line.substr(a, b - a) + "'");
        };
        SpectralDatum d;
        field(lo, comma, &d.kappa);
        field(comma + 1, hi, &d.weight);
        if (!(d.kappa > 0.0))
            throw ValidationError("spectral table line " +
                                  std::to_string(lineno) +
                                  ": kappa must be positive");
        if (d.weight < 0.0)
            throw ValidationError("spectral table line " +
                                  std::to_string(lineno) + ": negative weight");
        raw.push_back(d);
    }
    if (raw.empty()) throw ValidationError("spectral table: no records");

    std::sort(raw.begin(), raw.end(),
              [](const SpectralDatum& a, const SpectralDatum& b) {
                  return a.kappa < b.kappa;
              });
    SpectralTable table;
    for (const SpectralDatum& d : raw) {
        if (!table.data.empty() &&
            d.kappa - table.data.back().kappa <= kKappaMatchTol) {
            table.data.back().weight += d.weight;  // merged multiplicity
        } else {
            table.data.push_back(d);
        }
    }
    table.kappa_max = table.data.back().kappa;
    return table;
}

Cplx r_function(double y) {
    if (!std::isfinite(y)) throw DomainError("r_function: y not finite");
    if (y == 0.0) throw DomainError("r_function: pole at y = 0");
    return std::exp(log_r(y));
}

Cplx residue_r0(double kappa, const SpectralTable& table) {
    auto it = std::lower_bound(
        table.data.begin(), table.data.end(), kappa - kKappaMatchTol,
        [](const SpectralDatum& d, double v) { return d.kappa < v; });
    if (it == table.data.end() || std::fabs(it->kappa - kappa) > kKappaMatchTol)
        throw NotFoundError("residue_r0: kappa " + std::to_string(kappa) +
                            " not in table");
    return r_function(it->kappa) * it->weight;
}

LaplaceResult spectral_sum(const Cplx& s, const SpectralTable& table) {
    require_region(s, "spectral_sum");
    LaplaceResult out;
    out.s = s;
    out.k = 2;
    out.method = Method::theorem_spectral;
    out.value = Cplx(0.0, 0.0);
    out.err_estimate = 0.0;
    if (table.data.empty()) return out;

    const Cplx i(0.0, 1.0);
    const Cplx logs = std::log(s);
    Cplx acc(0.0, 0.0);
    double w_max = 0.0;
    for (const SpectralDatum& d : table.data) {
        double k = d.kappa;
        Cplx up = std::exp(-i * k * logs + log_r(k) + log_gamma(Cplx(0.5, k)));
        Cplx dn = std::exp(i * k * logs + log_r(-k) + log_gamma(Cplx(0.5, -k)));
        acc += d.weight * (up + dn);
        w_max = std::max(w_max, d.weight);
    }
    out.value = std::exp(-0.5 * logs) * acc;

    // Tail certificate for the entries beyond kappa_max: per-term envelope
    // 2 sqrt(2 pi / k) e^{-(pi/2 - phi) k} (from |R| <= 2 k^{-1/2} and
    // |G(1/2 + ik)| <= sqrt(2 pi) e^{-pi k/2}), integrated geometrically.
    double phi = std::fabs(std::arg(s));
    double decay = PI / 2.0 - phi;
    out.err_estimate = std::pow(std::abs(s), -0.5) * w_max * 4.0 *
                       std::sqrt(TWO_PI / table.kappa_max) *
                       std::exp(-decay * table.kappa_max) / decay;
    return out;
}

LaplaceResult theorem_l2(const Cplx& s, const MainTermCoeffs& coeffs,
                         const SpectralTable& table) {
    require_region(s, "theorem_l2");
    LaplaceResult out = spectral_sum(s, table);
    out.value += main_term(s, coeffs);
    return out;
}

G2Result g2_residual(const Cplx& s, const MainTermCoeffs& coeffs,
                     const SpectralTable& table, double c_envelope) {
    LaplaceResult thm = theorem_l2(s, coeffs, table);
    LaplaceResult quad = laplace_quadrature(2, s, QuadratureConfig{});
    G2Result g;
    g.residual = std::abs(quad.value - thm.value);
    double x = 1.0 / std::abs(s) + 20.0;  // keeps the nested logs positive
    double l1 = std::log(x);
    double l2 = std::log(l1);
    double l3 = std::log(l2);
    g.envelope =
        std::pow(std::abs(s), -0.5) *
        std::exp(-c_envelope * l1 /
                 (std::pow(l2, 2.0 / 3.0) * std::pow(l3, 1.0 / 3.0)));
    return g;
}

PartialSumReport partial_sum_bound(const SpectralTable& table,
                                   double c_exponent) {
    if (table.data.empty())
        throw ValidationError("partial_sum_bound: empty table");

    std::vector<double> prefix(table.data.size());
    double run = 0.0;
    for (std::size_t j = 0; j < table.data.size(); ++j) {
        run += table.data[j].weight;
        prefix[j] = run;
    }
    auto partial = [&](double K) {
        auto it = std::upper_bound(
            table.data.begin(), table.data.end(), K,
            [](double v, const SpectralDatum& d) { return v < d.kappa; });
        if (it == table.data.begin()) return 0.0;
        return prefix[std::size_t(it - table.data.begin()) - 1];
    };

    double k_lo = std::max(table.data.front().kappa, 2.0);
    double k_hi = table.kappa_max;
    std::vector<double> grid;
    if (k_hi <= k_lo * 1.0001) {
        grid.push_back(k_hi);
    } else {
        for (int i = 0; i < 32; ++i)
            grid.push_back(k_lo * std::pow(k_hi / k_lo, i / 31.0));
    }

    PartialSumReport rep;
    std::vector<double> lk, lr;
    for (double K : grid) {
        double lg = std::max(std::log(K), 0.1);  // guard tables with kappa ~ 1
        double ratio = partial(K) / (K * K * std::pow(lg, c_exponent));
        rep.max_ratio = std::max(rep.max_ratio, ratio);
        if (K >= k_hi / 10.0 && ratio > 0.0) {
            lk.push_back(std::log(K));
            lr.push_back(std::log(ratio));
        }
    }
    rep.trend_slope =
        lk.size() >= 2 ? detail::lsq_polyfit(lk, lr, 1).coeffs[1] : 0.0;
    rep.bounded = rep.trend_slope <= 0.1;
    return rep;
}

}  // namespace zl
