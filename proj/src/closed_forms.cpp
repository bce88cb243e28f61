// Closed-form and asymptotic expansions for the Laplace transforms of the
// second and fourth moments of |zeta(1/2 + ix)|:
//
//   * Kober's small-sigma expansion of L_1(2 sigma): explicit main term
//     (gamma - log(4 pi sigma)) / (2 sin sigma) plus an analytic correction
//     series sum c_n sigma^n recovered here by least squares against the
//     quadrature oracle.
//
//   * Atkinson's divisor expansions of L_1 (exponential kernel, strip
//     0 < Re s < pi) and L_2 (K_0 Bessel kernel, Re s > 0, |s| < pi).  Both
//     series are entire-function corrections to the transforms: they differ
//     from L_k by remainders that are holomorphic on the relevant regions,
//     so the truncated sums here carry an err_estimate for the dropped tail
//     only, not for that remainder.  Tail certificates use the explicit
//     modulus formulas: |exp(-2 pi i n e^{-is})| = exp(-2 pi n e^{Im s}
//     sin(Re s)) for the L_1 kernel, and the K_0 envelope |K_0(w)| <=
//     1.2 sqrt(pi/(2|w|)) e^{-Re w} (|w| >= 2) for the L_2 kernel, with
//     d(n) <= n, d_4(n) <= n^2 and an incomplete-gamma integral bound
//     sum_{n>N} n^2 e^{-beta sqrt n} <= 2 Int_{sqrt N}^inf u^5 e^{-beta u} du
//     (valid once the integrand is decreasing, i.e. N > (4/beta)^2).
//
//   * The quartic-log main term of L_2 with A, B pinned to their exact
//     values and C, D, E recovered by least squares in L = log(1/sigma).
#include "zl/closed_forms.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <tuple>

#include "zl/constants.hpp"
#include "zl/errors.hpp"
#include "zl/special.hpp"
#include "zl/transforms.hpp"

namespace zl {

namespace detail {

PolyFit lsq_polyfit(const std::vector<double>& xs,
                    const std::vector<double>& ys, int N) {
    if (N < 0) throw ValidationError("lsq_polyfit: negative degree");
    if (xs.size() != ys.size() || xs.size() < static_cast<size_t>(N) + 1)
        throw ValidationError("lsq_polyfit: not enough points");
    const long m = static_cast<long>(xs.size());
    Eigen::MatrixXd design(m, N + 1);
    Eigen::VectorXd rhs(m);
    for (long i = 0; i < m; ++i) {
        double p = 1.0;
        for (int j = 0; j <= N; ++j) {
            design(i, j) = p;
            p *= xs[static_cast<size_t>(i)];
        }
        rhs(i) = ys[static_cast<size_t>(i)];
    }
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(design);
    if (qr.rank() < N + 1)
        throw IllConditionedError("lsq_polyfit: Vandermonde numerically singular");
    Eigen::VectorXd sol = qr.solve(rhs);
    PolyFit out;
    out.coeffs.assign(sol.data(), sol.data() + N + 1);
    out.residual = std::sqrt((design * sol - rhs).squaredNorm() /
                             static_cast<double>(m));
    return out;
}

double cached_laplace_real(int k, double sigma, double tol) {
    static std::map<std::tuple<int, double, double>, double> memo;
    static std::mutex mu;
    auto key = std::make_tuple(k, sigma, tol);
    {
        std::lock_guard<std::mutex> lock(mu);
        auto it = memo.find(key);
        if (it != memo.end()) return it->second;
    }
    QuadratureConfig cfg;
    cfg.tol = tol;
    double value = laplace_quadrature(k, Cplx(sigma, 0.0), cfg).value.real();
    std::lock_guard<std::mutex> lock(mu);
    memo.emplace(key, value);
    return value;
}

}  // namespace detail

double kober_main(double sigma) {
    require_finite(sigma, "kober_main");
    if (!(sigma > 0.0) || !(sigma < PI / 2.0))
        throw DomainError("kober_main: sigma outside (0, pi/2)");
    return (EULER_GAMMA - std::log(4.0 * PI * sigma)) / (2.0 * std::sin(sigma));
}

KoberCoeffs kober_fit(const std::vector<double>& sigmas, int N) {
    if (N < 1) throw DomainError("kober_fit: N must be >= 1");
    if (sigmas.size() < static_cast<size_t>(N) + 3)
        throw ValidationError("kober_fit: need at least N + 3 sigma values");
    std::vector<double> xs = sigmas;
    std::sort(xs.begin(), xs.end());
    for (size_t i = 0; i < xs.size(); ++i) {
        if (!(xs[i] > 0.0) || !(xs[i] < 0.5))
            throw ValidationError("kober_fit: sigma outside (0, 0.5)");
        if (i > 0 && !(xs[i] > xs[i - 1] + 1e-12))
            throw ValidationError("kober_fit: sigma values must be distinct");
    }
    std::vector<double> ys(xs.size());
    for (size_t i = 0; i < xs.size(); ++i) {
        double l1 = detail::cached_laplace_real(1, 2.0 * xs[i], 1e-8);
        ys[i] = l1 - kober_main(xs[i]);
    }
    detail::PolyFit fit = detail::lsq_polyfit(xs, ys, N);
    KoberCoeffs out;
    out.c = fit.coeffs;
    out.N = N;
    out.residual = fit.residual;
    return out;
}

LaplaceResult atkinson_l1(const Cplx& s, long n_terms,
                          const DivisorTable& dtable) {
    require_finite(s, "atkinson_l1");
    double sig = s.real(), tau = s.imag();
    if (!(sig > 0.0) || !(sig < PI))
        throw DomainError("atkinson_l1: Re s outside (0, pi)");
    if (dtable.order != 2)
        throw DomainError("atkinson_l1: divisor table of order 2 required");
    if (n_terms < 1 || n_terms > static_cast<long>(dtable.limit))
        throw RangeError("atkinson_l1: n_terms outside [1, dtable.limit]");

    const Cplx i_unit(0.0, 1.0);
    Cplx first = -i_unit * std::exp(0.5 * i_unit * s) *
                 (Cplx(LOG_2PI - EULER_GAMMA, 0.0) + (PI / 2.0 - s) * i_unit);
    Cplx kernel_log = -2.0 * PI * i_unit * std::exp(-i_unit * s);
    Cplx sum(0.0, 0.0);
    for (long n = 1; n <= n_terms; ++n) {
        sum += static_cast<double>(dtable(n)) *
               std::exp(static_cast<double>(n) * kernel_log);
    }
    Cplx prefactor = 2.0 * PI * std::exp(-0.5 * i_unit * s);

    // dropped tail: d(n) <= n and |kernel^n| = r^n,
    // sum_{n>N} n r^n = r^{N+1} ((N+1)(1-r) + r) / (1-r)^2
    double r = std::exp(-2.0 * PI * std::exp(tau) * std::sin(sig));
    double np1 = static_cast<double>(n_terms) + 1.0;
    double tail = std::abs(prefactor) * std::pow(r, np1) *
                  (np1 * (1.0 - r) + r) / ((1.0 - r) * (1.0 - r));
    if (!(tail <= 1e-2))
        throw ConvergenceError(
            "atkinson_l1: geometric tail bound above 1e-2 at n_terms");

    LaplaceResult out;
    out.s = s;
    out.k = 1;
    out.value = first + prefactor * sum;
    out.method = Method::atkinson_series;
    out.err_estimate = tail;
    return out;
}

LaplaceResult atkinson_l2_k0(const Cplx& s, long n_terms,
                             const DivisorTable& d4table) {
    require_finite(s, "atkinson_l2_k0");
    double sig = s.real(), tau = s.imag();
    if (!(sig > 0.0)) throw DomainError("atkinson_l2_k0: Re s <= 0");
    if (!(std::abs(s) < PI)) throw DomainError("atkinson_l2_k0: |s| >= pi");
    if (d4table.order != 4)
        throw DomainError("atkinson_l2_k0: divisor table of order 4 required");
    if (n_terms < 1 || n_terms > static_cast<long>(d4table.limit))
        throw RangeError("atkinson_l2_k0: n_terms outside [1, d4table.limit]");

    const Cplx i_unit(0.0, 1.0);
    Cplx rot = std::exp(-0.5 * i_unit * s);  // e^{-is/2}
    Cplx sum(0.0, 0.0);
    for (long n = 1; n <= n_terms; ++n) {
        Cplx w = 4.0 * PI * std::sqrt(static_cast<double>(n)) * i_unit * rot;
        sum += static_cast<double>(d4table(n)) *
               bessel_k0(w);
    }
    Cplx prefactor = 4.0 * PI * rot;

    // dropped tail through the K_0 magnitude envelope; decay rate per
    // sqrt(n) is beta = Re(4 pi i e^{-is/2}) = 4 pi e^{tau/2} sin(sig/2)
    double beta = 4.0 * PI * std::exp(0.5 * tau) * std::sin(0.5 * sig);
    double root_n = std::sqrt(static_cast<double>(n_terms));
    double tail = HUGE_VAL;
    if (root_n * beta > 4.0 && root_n > 4.0 / beta * 2.0) {
        // sum_{n>N} n^2 e^{-beta sqrt n} <= 2 Int_{sqrt N}^inf u^5 e^{-beta u}
        double z = beta * root_n;
        double poly = 120.0 + z * (120.0 + z * (60.0 + z * (20.0 + z * (5.0 + z))));
        double integral = 2.0 * std::exp(-z) * poly / std::pow(beta, 6.0);
        double envelope = 1.2 * std::sqrt(PI / 2.0) /
                          std::sqrt(4.0 * PI * std::exp(0.5 * tau));
        tail = std::abs(prefactor) * envelope * integral;
    }
    if (!(tail <= 1e-2))
        throw ConvergenceError(
            "atkinson_l2_k0: envelope tail bound above 1e-2 at n_terms");

    LaplaceResult out;
    out.s = s;
    out.k = 2;
    out.value = prefactor * sum;
    out.method = Method::k0_series;
    out.err_estimate = tail;
    return out;
}

Cplx main_term(const Cplx& s, const MainTermCoeffs& coeffs) {
    require_finite(s, "main_term");
    double mod = std::abs(s);
    if (!(mod > 0.0) || mod > 1.0)
        throw DomainError("main_term: |s| outside (0, 1]");
    if (!(s.real() > 0.0) || std::abs(std::arg(s)) >= PI / 2.0)
        throw DomainError("main_term: |arg s| >= pi/2");
    Cplx L = -std::log(s);  // principal Log(1/s)
    Cplx poly = Cplx(coeffs.A, 0.0);
    poly = poly * L + coeffs.B;
    poly = poly * L + coeffs.C;
    poly = poly * L + coeffs.D;
    poly = poly * L + coeffs.E;
    return poly / s;
}

MainTermCoeffs paper_main_coeffs() {
    MainTermCoeffs mc;
    mc.A = 1.0 / (2.0 * PI * PI);
    mc.B = (2.0 * LOG_2PI - 6.0 * EULER_GAMMA +
            24.0 * ZETA_PRIME_2 / (PI * PI)) /
           (PI * PI);
    mc.provenance = CoeffProvenance::paper_exact;
    return mc;
}

MainTermCoeffs fit_main_coeffs(const std::vector<double>& sigmas) {
    if (sigmas.size() < 8)
        throw ValidationError("fit_main_coeffs: need at least 8 sigma values");
    std::vector<double> xs = sigmas;
    std::sort(xs.begin(), xs.end());
    for (size_t i = 0; i < xs.size(); ++i) {
        if (!(xs[i] >= 1e-3) || !(xs[i] <= 0.3))
            throw ValidationError("fit_main_coeffs: sigma outside [1e-3, 0.3]");
        if (i > 0 && !(xs[i] > xs[i - 1] + 1e-12))
            throw ValidationError("fit_main_coeffs: sigma values must be distinct");
    }
    MainTermCoeffs mc = paper_main_coeffs();
    const long m = static_cast<long>(xs.size());
    Eigen::MatrixXd design(m, 3);
    Eigen::VectorXd rhs(m);
    for (long i = 0; i < m; ++i) {
        double sigma = xs[static_cast<size_t>(i)];
        double tol = std::min(1e-3, 1e-6 * (1.0 + 1.0 / sigma));
        double l2 = detail::cached_laplace_real(2, sigma, tol);
        double L = std::log(1.0 / sigma);
        design(i, 0) = L * L;
        design(i, 1) = L;
        design(i, 2) = 1.0;
        rhs(i) = sigma * l2 - mc.A * L * L * L * L - mc.B * L * L * L;
    }
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(design);
    if (qr.rank() < 3)
        throw IllConditionedError("fit_main_coeffs: design matrix singular");
    Eigen::VectorXd sol = qr.solve(rhs);
    mc.C = sol(0);
    mc.D = sol(1);
    mc.E = sol(2);
    mc.provenance = CoeffProvenance::fitted;
    return mc;
}

}  // namespace zl
