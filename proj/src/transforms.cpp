// Laplace/Mellin transforms of |zeta(1/2+it)|^{2k} and the moment integrals.
//
// The infinite integrals are truncated at X with a certified tail: the
// integrand is bounded by c (1+t)^alpha e^{-sigma t} (alpha = 1/3, c = 10 for
// k=1; alpha = 2/3, c = 100 for k=2 — generous on the computed range), and
//   Int_X^inf c (1+t)^a e^{-s t} dt <= c (1+X)^a e^{-s X} / s / (1 - a/(s(1+X)))
// by one integration by parts.  X starts at cutoff_factor log(1/tol)/sigma
// and grows geometrically until the bound is below tol/2; the finite part
// then gets the other tol/2 as its panel budget.  Panel widths track the
// local oscillation of |zeta|^{2k} (mean zero gap 2pi/log t) and the kernel
// frequency |Im s|.
//
// Closed-form log-moments: with L = -Log s and Gamma(1+a) = sum_i g_i a^i,
//   Int_0^inf log^j T e^{-sT} dT = d^j/da^j [Gamma(1+a) s^{-1-a}]|_{a=0}
//                                = (j!/s) sum_{i+m=j} g_i L^m / m!.
// M(s), the transform of d/dT[T P4(log T)] = sum_j b_j log^j T with
// b_j = a_j + (j+1) a_{j+1}, follows by linearity.  The same triangular
// structure inverts exactly: matching sigma L_2(sigma) ~ A log^4(1/s) + ...
// term by term gives b_4 = A, b_3 = B - 4 g_1 b_4, and so on down, then
// a_j = b_j - (j+1) a_{j+1}.  That map is what p4_from_main_coeffs computes.
#include "zl/transforms.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "zl/constants.hpp"
#include "zl/errors.hpp"
#include "zl/quadrature.hpp"
#include "zl/zeta.hpp"

namespace zl {

namespace {

double zeta_abs2k(int k, double t) {
    if (k == 2) return abs_zeta_pow4(t);
    Cplx z = t >= 10.0 ? zeta_half_rs(t) : zeta_half_em(t, 1e-12);
    return z.real() * z.real() + z.imag() * z.imag();
}

void check_k(int k) {
    if (k != 1 && k != 2) throw DomainError("k must be 1 or 2");
}

void check_cfg(const QuadratureConfig& cfg) {
    if (!(cfg.tol > 0.0)) throw ValidationError("QuadratureConfig: tol <= 0");
    if (cfg.panel_points < 8)
        throw ValidationError("QuadratureConfig: panel_points < 8");
    if (cfg.max_panels < 1)
        throw ValidationError("QuadratureConfig: max_panels < 1");
}

struct Majorant {
    double c, alpha;
};
Majorant majorant(int k) { return k == 2 ? Majorant{100.0, 2.0 / 3.0}
                                         : Majorant{10.0, 1.0 / 3.0}; }

// Int_X^inf c (1+t)^a e^{-sigma t} dt upper bound; +inf while the
// integration-by-parts geometric factor is not yet contractive.
double tail_bound(double c, double a, double sigma, double X) {
    double q = a / (sigma * (1.0 + X));
    if (q >= 0.5) return HUGE_VAL;
    return c * std::pow(1.0 + X, a) * std::exp(-sigma * X) / sigma /
           (1.0 - q);
}

double pick_cutoff(double c, double a, double sigma, double tol,
                   double cutoff_factor) {
    double X = std::max(1.0, cutoff_factor * std::log(1.0 / tol) / sigma);
    for (int i = 0; i < 200 && tail_bound(c, a, sigma, X) > 0.5 * tol; ++i)
        X *= 1.25;
    return X;
}

double osc_width(double x) { return std::min(2.0, TWO_PI / std::log(2.0 + x)); }

}  // namespace

LaplaceResult laplace_quadrature(int k, const Cplx& s,
                                 const QuadratureConfig& cfg) {
    check_k(k);
    check_cfg(cfg);
    require_finite(s, "laplace_quadrature");
    double sigma = s.real();
    if (sigma <= 0.0) throw DomainError("laplace_quadrature: Re s <= 0");

    Majorant mj = majorant(k);
    double X = pick_cutoff(mj.c, mj.alpha, sigma, cfg.tol, cfg.cutoff_factor);
    double tail = tail_bound(mj.c, mj.alpha, sigma, X);

    double kernel_w = 12.0 / (1.0 + std::fabs(s.imag()));
    auto width = [kernel_w](double x) {
        return std::min(osc_width(x), kernel_w);
    };
    auto f = [k, s](double x) -> Cplx {
        return zeta_abs2k(k, x) * std::exp(-s * x);
    };
    AdaptiveResult r = integrate_adaptive(f, 0.0, X, 0.5 * cfg.tol, width,
                                          cfg.panel_points, cfg.max_panels);
    LaplaceResult out;
    out.s = s;
    out.k = k;
    out.value = r.value;
    out.method = Method::quadrature;
    out.err_estimate = r.err + tail;
    return out;
}

MomentRecord moment_integral(int k, double T) {
    check_k(k);
    require_finite(T, "moment_integral");
    if (!(T > 0.0) || T > 5e4)
        throw RangeError("moment_integral: T outside (0, 5e4]");
    auto f = [k](double x) -> Cplx { return {zeta_abs2k(k, x), 0.0}; };
    AdaptiveResult r = integrate_adaptive(
        f, 0.0, T, 0.5e-6 * (1.0 + T), [](double x) { return osc_width(x); },
        20, 1000000);
    return {T, r.value.real(), k};
}

double e2_error_term(double T, const P4Coeffs& coeffs) {
    require_finite(T, "e2_error_term");
    if (!(T > 1.0)) throw RangeError("e2_error_term: T <= 1");
    double L = std::log(T);
    double p4 = (((coeffs.a[4] * L + coeffs.a[3]) * L + coeffs.a[2]) * L +
                 coeffs.a[1]) * L + coeffs.a[0];
    return moment_integral(2, T).value - T * p4;
}

namespace {

// Taylor coefficients g_0..g_4 of Gamma(1+a) at a = 0, from
// log Gamma(1+a) = -gamma a + sum_{k>=2} (-1)^k zeta(k) a^k / k.
struct GammaSeries {
    double v[5];
};
const double* gamma_series() {
    static const GammaSeries gs = [] {
        constexpr double ZETA2 = 1.6449340668482264;
        constexpr double ZETA3 = 1.2020569031595943;
        constexpr double ZETA4 = 1.0823232337111382;
        double w[5] = {0.0, -EULER_GAMMA, ZETA2 / 2.0, -ZETA3 / 3.0,
                       ZETA4 / 4.0};
        GammaSeries r{};
        r.v[0] = 1.0;
        for (int n = 1; n <= 4; ++n) {
            double acc = 0.0;
            for (int k = 1; k <= n; ++k) acc += k * w[k] * r.v[n - k];
            r.v[n] = acc / n;
        }
        return r;
    }();
    return gs.v;
}

double factorial(int n) {
    double f = 1.0;
    for (int i = 2; i <= n; ++i) f *= i;
    return f;
}

}  // namespace

namespace detail {

Cplx log_moment(int j, const Cplx& s) {
    const double* g = gamma_series();
    Cplx L = -std::log(s);
    Cplx acc(0.0, 0.0);
    Cplx Lm(1.0, 0.0);
    for (int m = 0; m <= j; ++m) {
        acc += g[j - m] * Lm / factorial(m);
        Lm *= L;
    }
    return factorial(j) * acc / s;
}

}  // namespace detail

P4Coeffs p4_from_main_coeffs(const MainTermCoeffs& mc) {
    const double* g = gamma_series();
    double b4 = mc.A;
    double b3 = mc.B - 4.0 * g[1] * b4;
    double b2 = mc.C - 3.0 * g[1] * b3 - 12.0 * g[2] * b4;
    double b1 = mc.D - 2.0 * g[1] * b2 - 6.0 * g[2] * b3 - 24.0 * g[3] * b4;
    double b0 = mc.E - g[1] * b1 - 2.0 * g[2] * b2 - 6.0 * g[3] * b3 -
                24.0 * g[4] * b4;
    P4Coeffs p;
    p.a[4] = b4;
    p.a[3] = b3 - 4.0 * p.a[4];
    p.a[2] = b2 - 3.0 * p.a[3];
    p.a[1] = b1 - 2.0 * p.a[2];
    p.a[0] = b0 - 1.0 * p.a[1];
    return p;
}

Cplx e2_laplace(const Cplx& s, const P4Coeffs& coeffs) {
    require_finite(s, "e2_laplace");
    double sigma = s.real();
    if (sigma <= 0.0) throw DomainError("e2_laplace: Re s <= 0");
    QuadratureConfig cfg;
    cfg.tol = std::max(1e-10, 1e-8 * (1.0 + 1.0 / sigma));
    LaplaceResult l2 = laplace_quadrature(2, s, cfg);
    Cplx m(0.0, 0.0);
    for (int j = 0; j <= 4; ++j) {
        double bj = coeffs.a[j] + (j < 4 ? (j + 1.0) * coeffs.a[j + 1] : 0.0);
        if (bj != 0.0) m += bj * detail::log_moment(j, s);
    }
    return (l2.value - m) / s;
}

double laplace_identity_residual(int k, double T) {
    check_k(k);
    require_finite(T, "laplace_identity_residual");
    if (T < 1.0 || T > 100.0)
        throw RangeError("laplace_identity_residual: T outside [1, 100]");
    Cplx s(1.0 / T, 0.0);

    // LHS, two passes: rough scale, then 2e-6-relative tolerance
    QuadratureConfig rough_cfg;
    rough_cfg.tol = 1e-3;
    double scale = std::abs(laplace_quadrature(k, s, rough_cfg).value);
    QuadratureConfig cfg;
    cfg.tol = std::max(1e-9, 2e-6 * scale);
    Cplx lhs = laplace_quadrature(k, s, cfg).value;

    // RHS: (1/T) Int_0^X I_k(t) e^{-t/T} dt with I_k built as a running
    // prefix along the outer march (independent scheme: fixed 24-point
    // panels, no adaptivity, anchored partial integrals).
    Majorant mj = majorant(k);
    double sigma = 1.0 / T;
    // majorant for I_k(t) itself: c (1+t)^{1+alpha}
    double X = std::max(1.0, 1.5 * std::log(1.0 / cfg.tol) / sigma);
    for (int i = 0;
         i < 200 && tail_bound(mj.c, 1.0 + mj.alpha, sigma, X) > 0.5 * cfg.tol * T;
         ++i)
        X *= 1.25;
    const int pts = 24;
    const GaussRule& rule = gauss_rule(pts);
    auto f = [k](double x) -> Cplx { return {zeta_abs2k(k, x), 0.0}; };
    double prefix = 0.0;  // I_k at the current panel start
    double pos = 0.0;
    std::vector<Cplx> leaves;
    while (pos < X) {
        double w = std::min({osc_width(pos), 0.5 * T, X - pos});
        double hi = (X - pos < 1.5 * w) ? X : pos + w;
        double mid = 0.5 * (pos + hi), half = 0.5 * (hi - pos);
        Cplx acc(0.0, 0.0);
        for (int i = 0; i < pts; ++i) {
            double t = mid + half * rule.x[i];
            double ik = prefix + gauss_panel(f, pos, t, pts).real();
            acc += rule.w[i] * ik * std::exp(-t / T);
        }
        leaves.push_back(acc * half);
        prefix += gauss_panel(f, pos, hi, pts).real();
        pos = hi;
    }
    Cplx g(0.0, 0.0);
    for (const Cplx& v : leaves) g += v;
    double rhs = g.real() / T;
    return std::abs(lhs.real() - rhs);
}

bool trivial_bound_check(int k, double T) {
    check_k(k);
    require_finite(T, "trivial_bound_check");
    if (T < 1.0) throw RangeError("trivial_bound_check: T < 1");
    MomentRecord ik = moment_integral(k, T);
    double err_i = 1e-6 * (1.0 + T);
    QuadratureConfig cfg;
    cfg.tol = 1e-6 * (1.0 + T);
    LaplaceResult lk = laplace_quadrature(k, Cplx(1.0 / T, 0.0), cfg);
    double e = std::exp(1.0);
    return ik.value <= e * lk.value.real() + err_i + e * lk.err_estimate;
}

namespace detail {

MellinResult mellin_z2_full(const Cplx& w) {
    require_finite(w, "mellin_z2");
    double u = w.real();
    if (u <= 1.0) throw DomainError("mellin_z2: Re w <= 1");
    double X = u > 3.0 ? 2000.0 : 20000.0;
    auto f = [w](double t) -> Cplx {
        return abs_zeta_pow4(t) * std::exp(-w * std::log(t));
    };
    auto width = [w](double x) {
        return std::min(osc_width(x), 12.0 * x / (1.0 + std::fabs(w.imag())));
    };
    // two passes: rough scale, then tight budget
    AdaptiveResult rough =
        integrate_adaptive(f, 1.0, std::min(X, 300.0), 1e-2, width, 16, 400000);
    double tol = std::max(1e-12, 3e-9 * std::abs(rough.value));
    AdaptiveResult r = integrate_adaptive(f, 1.0, X, tol, width, 16, 2000000);

    // analytic completion of the tail by the known leading asymptotic
    // mean of |zeta|^4: d/dt[t P4(log t)] with the closed-form A, B and
    // C = D = E = 0 (lower orders unknown here; covered by the error bound)
    MainTermCoeffs mc;
    mc.A = 1.0 / (2.0 * PI * PI);
    mc.B = (2.0 * std::log(TWO_PI) - 6.0 * EULER_GAMMA +
            24.0 * ZETA_PRIME_2 / (PI * PI)) / (PI * PI);
    P4Coeffs p4 = p4_from_main_coeffs(mc);
    double lx = std::log(X);
    Cplx wm1 = w - 1.0;
    Cplx tail(0.0, 0.0);
    for (int j = 0; j <= 4; ++j) {
        double bj = p4.a[j] + (j < 4 ? (j + 1.0) * p4.a[j + 1] : 0.0);
        if (bj == 0.0) continue;
        // Int_X^inf log^j t . t^{-w} dt
        //   = X^{1-w} sum_m C(j,m) log^{j-m} X . m! / (w-1)^{m+1}
        Cplx integral(0.0, 0.0);
        double comb = 1.0;
        Cplx pw = wm1;
        for (int m = 0; m <= j; ++m) {
            integral += comb * std::pow(lx, j - m) * factorial(m) / pw;
            comb = comb * (j - m) / (m + 1.0);
            pw *= wm1;
        }
        tail += bj * std::exp((1.0 - w) * lx) * integral;
    }

    // error: panel bound + fluctuating part of the tail (E2-style envelope,
    // constant validated on the computed range) + unknown lower-order
    // polynomial terms with pinned coefficient bounds
    double env_e2 = 25.0 * std::pow(X, 0.5 - u) *
                    (1.0 + std::abs(w) / (u - 0.5));
    double env_poly = (30.0 * lx * lx + 120.0 * lx + 250.0) *
                      std::pow(X, 1.0 - u) *
                      (1.0 + 1.0 / (u - 1.0)) / (u - 1.0);
    MellinResult out;
    out.value = r.value + tail;
    out.err = r.err + env_e2 + env_poly;
    return out;
}

}  // namespace detail

Cplx mellin_z2(const Cplx& w) { return detail::mellin_z2_full(w).value; }

}  // namespace zl
