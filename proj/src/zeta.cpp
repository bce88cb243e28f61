// zeta(1/2+it): Euler-Maclaurin reference path and Riemann-Siegel fast path.
//
// Euler-Maclaurin.  For s = 1/2 + it,
//   zeta(s) = sum_{n<=N} n^{-s} + N^{1-s}/(s-1) - N^{-s}/2
//           + sum_{k>=1} B_{2k}/(2k)! s(s+1)...(s+2k-2) N^{-s-2k+1},
// truncated after K terms with the classical remainder bound
//   |R_K| <= |c_{K+1}| |s+2K+1| / (Re s + 2K+1).
// The absolute-error contract reaches 1e-13 while t runs to 5000, where the
// phases t log n approach 4e4: a plain double phase already carries ~1e-11
// of rounding, two orders over budget.  The phases are therefore computed in
// double-double (cached log n to ~31 digits, multiplied and reduced mod 2pi
// in double-double) and only then rounded; the main sum is Kahan-compensated.
// What remains is ~1e-15 per-term noise, RMS well under the tolerance floor.
//
// Riemann-Siegel.  Z(t) = 2 sum_{n<=N} n^{-1/2} cos(theta - t log n)
//   + (-1)^{N+1} (t/2pi)^{-1/4} sum_{j<=3} C_j(p) (t/2pi)^{-j/2},
// N = floor(sqrt(t/2pi)), p the fractional remainder, and the C_j the
// standard combinations of derivatives of
//   Psi(p) = cos(2pi(p^2 - p - 1/16)) / cos(2pi p).
// The derivatives (up to the ninth) are taken from a truncated Taylor
// expansion computed with exact series recurrences: cos/sin of a polynomial
// via the ODE recurrence, then series division.  Near p = 1/4 and 3/4 both
// numerator and denominator of Psi vanish; there the expansion is taken at
// the singular point itself, the vanishing constant terms are dropped (the
// shared factor delta cancels), and the quotient series is evaluated at
// delta = p - q.  This keeps every derivative accurate near the carrier
// zeros instead of losing digits to 0/0 cancellation.  The four-term tail
// error is ~0.03 (t/2pi)^{-9/4}, under 1e-7 from t = 2000 up; below 2000 the
// fast path just calls the reference evaluator.
#include "zl/zeta.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "zl/constants.hpp"
#include "zl/dd.hpp"
#include "zl/errors.hpp"
#include "zl/special.hpp"
#include "zl/taylor.hpp"

namespace zl {

namespace {

constexpr double PI_DD_LO = 1.2246467991473532e-16;
inline dd::DD two_pi_dd() { return {2.0 * PI, 2.0 * PI_DD_LO}; }

// B_{2k}/(2k)! for k = 1..15 (exact rationals evaluated once).
const double B2K_OVER_FACT[16] = {
    0.0,
    1.0 / 12,                          // B2/2!
    -1.0 / 720,                        // B4/4!
    1.0 / 30240,                       // B6/6!
    -1.0 / 1209600,                    // B8/8!
    1.0 / 47900160,                    // B10/10!
    -691.0 / 1307674368000.0,          // B12/12!
    1.0 / 74724249600.0,               // B14/14!
    -3617.0 / 10670622842880000.0,     // B16/16!
    43867.0 / 5109094217170944000.0,   // B18/18!
    -174611.0 / 802857662698291200000.0,
    77683.0 / 14101100039391805440000.0,
    -236364091.0 / 1693824136731743669452800000.0,
    657931.0 / 186134520519971831808000000.0,
    -3392780147.0 / 37893265687455865519472640000000.0,
    1723168255201.0 / 759790291646040068357842010112000000.0,
};

// log n in double-double, cached; index 0 unused.
const dd::DD& log_dd(std::size_t n) {
    static const std::vector<dd::DD> table = [] {
        std::vector<dd::DD> t(12001);
        for (std::size_t i = 1; i < t.size(); ++i)
            t[i] = dd::log_mag(Cplx(static_cast<double>(i), 0.0));
        return t;
    }();
    return table.at(n);
}

// exp(-i t log n) with the phase reduced mod 2pi in double-double.
Cplx unit_phase(double t, const dd::DD& logn) {
    dd::DD phi = dd::mul(logn, t);
    double q = std::nearbyint(dd::to_double(phi) / (2.0 * PI));
    dd::DD red = dd::sub(phi, dd::mul(two_pi_dd(), q));
    double a = dd::to_double(red);
    return {std::cos(a), -std::sin(a)};
}

struct KahanC {
    double re = 0.0, im = 0.0, cre = 0.0, cim = 0.0;
    void add(const Cplx& x) {
        double yr = x.real() - cre;
        double tr = re + yr;
        cre = (tr - re) - yr;
        re = tr;
        double yi = x.imag() - cim;
        double ti = im + yi;
        cim = (ti - im) - yi;
        im = ti;
    }
    Cplx value() const { return {re, im}; }
};

// One Euler-Maclaurin evaluation at fixed N; returns value and a rigorous
// truncation bound for the correction tail.
Cplx em_once(double t, long N, double& remainder) {
    const Cplx s(0.5, t);
    KahanC main;
    for (long n = 1; n <= N; ++n) {
        double amp = 1.0 / std::sqrt(static_cast<double>(n));
        main.add(amp * unit_phase(t, log_dd(static_cast<std::size_t>(n))));
    }
    Cplx nms = unit_phase(t, log_dd(static_cast<std::size_t>(N))) /
               std::sqrt(static_cast<double>(N));  // N^{-s}
    double dN = static_cast<double>(N);
    Cplx tail = nms * dN / (s - 1.0) - 0.5 * nms;

    // corrections: c_1 = s N^{-s-1} / 12, ratio recurrence thereafter
    Cplx corr(0.0, 0.0);
    Cplx c = s * nms / (12.0 * dN);
    double n2 = dN * dN;
    int k = 1;
    remainder = -1.0;
    for (; k <= 14; ++k) {
        corr += c;
        Cplx cnext = c * (B2K_OVER_FACT[k + 1] / B2K_OVER_FACT[k]) *
                     (s + Cplx(2.0 * k - 1.0, 0.0)) *
                     (s + Cplx(2.0 * k, 0.0)) / n2;
        double bound = std::abs(cnext) * std::abs(s + Cplx(2.0 * k + 1.0, 0.0)) /
                       (0.5 + 2.0 * k + 1.0);
        if (bound < 1e-16) {
            remainder = bound;
            break;
        }
        remainder = bound;
        c = cnext;
    }
    return main.value() + tail + corr;
}

}  // namespace

Cplx zeta_half_em(double t, double target_tol) {
    require_finite(t, "zeta_half_em");
    if (t < 0.0 || t > 5000.0)
        throw RangeError("zeta_half_em: t outside [0, 5000]");
    if (!(target_tol >= 1e-13))
        throw ToleranceError("zeta_half_em: target_tol below 1e-13");
    long N = std::max<long>(16, static_cast<long>(std::ceil(0.65 * t)));
    for (int attempt = 0; attempt < 5; ++attempt) {
        double remainder = 0.0;
        Cplx v = em_once(t, N, remainder);
        if (remainder <= 0.5 * target_tol) return v;
        N = static_cast<long>(N * 1.35) + 8;
        if (N > 11500) break;
    }
    throw ToleranceError("zeta_half_em: cannot certify requested tolerance");
}

double rs_theta(double t) {
    return log_gamma(Cplx(0.25, 0.5 * t)).imag() - 0.5 * t * std::log(PI);
}

namespace {

// Taylor series of Psi around x0 (degree deg), with the 0/0 at the carrier
// zeros 1/4, 3/4 removed by dropping the vanishing constant terms.
taylor::Series psi_series(double x0, std::size_t deg) {
    using taylor::Series;
    // numerator angle u(x) = 2pi((x0+x)^2 - (x0+x) - 1/16)
    Series u = {TWO_PI * (x0 * x0 - x0 - 0.0625), TWO_PI * (2.0 * x0 - 1.0),
                TWO_PI};
    // denominator angle v(x) = 2pi(x0 + x)
    Series v = {TWO_PI * x0, TWO_PI};
    Series uc, us, vc, vs;
    taylor::cos_sin(u, deg + 1, uc, us);
    taylor::cos_sin(v, deg + 1, vc, vs);
    if (x0 == 0.25 || x0 == 0.75) {
        // both cosines vanish at x0: divide the shifted series instead
        Series num(deg + 1), den(deg + 1);
        for (std::size_t j = 0; j <= deg; ++j) {
            num[j] = uc[j + 1];
            den[j] = vc[j + 1];
        }
        return taylor::div(num, den, deg);
    }
    uc.resize(deg + 1);
    vc.resize(deg + 1);
    return taylor::div(uc, vc, deg);
}

// C_0..C_3 of the Riemann-Siegel remainder at fractional part p.
void rs_coefficients(double p, double c[4]) {
    double delta = 0.0;
    double x0 = p;
    std::size_t deg = 12;
    if (std::fabs(p - 0.25) < 0.0625) {
        x0 = 0.25;
        delta = p - 0.25;
        deg = 26;
    } else if (std::fabs(p - 0.75) < 0.0625) {
        x0 = 0.75;
        delta = p - 0.75;
        deg = 26;
    }
    taylor::Series psi = psi_series(x0, deg);
    auto d = [&](int m) { return taylor::derivative_at(psi, m, delta); };
    const double pi2 = PI * PI;
    const double pi4 = pi2 * pi2;
    const double pi6 = pi4 * pi2;
    c[0] = d(0);
    c[1] = -d(3) / (96.0 * pi2);
    c[2] = d(2) / (64.0 * pi2) + d(6) / (18432.0 * pi4);
    c[3] = -d(1) / (64.0 * pi2) - d(5) / (3840.0 * pi4) -
           d(9) / (5308416.0 * pi6);
}

}  // namespace

Cplx zeta_half_rs(double t) {
    require_finite(t, "zeta_half_rs");
    if (t < 10.0) throw RangeError("zeta_half_rs: t < 10");
    if (t > 1e5) throw RangeError("zeta_half_rs: t > 1e5");
    if (t < 2000.0) return zeta_half_em(t, 1e-9);

    double theta = rs_theta(t);
    double u = std::sqrt(t / TWO_PI);
    long N = static_cast<long>(u);
    double p = u - static_cast<double>(N);
    double z = 0.0;
    for (long n = 1; n <= N; ++n) {
        double dn = static_cast<double>(n);
        z += 2.0 / std::sqrt(dn) * std::cos(theta - t * std::log(dn));
    }
    double c[4];
    rs_coefficients(p, c);
    double x = 1.0 / u;  // (t/2pi)^{-1/2}
    double corr = ((c[3] * x + c[2]) * x + c[1]) * x + c[0];
    double sign = (N % 2 == 0) ? -1.0 : 1.0;  // (-1)^{N+1}
    z += sign * corr / std::sqrt(u);          // (t/2pi)^{-1/4} = u^{-1/2}
    return std::polar(1.0, -theta) * z;
}

double abs_zeta_pow4(double t) {
    require_finite(t, "abs_zeta_pow4");
    if (t < 0.0) throw RangeError("abs_zeta_pow4: t < 0");
    Cplx v = t >= 10.0 ? zeta_half_rs(t) : zeta_half_em(t, 1e-12);
    double m2 = v.real() * v.real() + v.imag() * v.imag();
    return m2 * m2;
}

CriticalLineSample sample_critical_line(double t) {
    require_finite(t, "sample_critical_line");
    if (t < 0.0) throw RangeError("sample_critical_line: t < 0");
    CriticalLineSample s;
    s.t = t;
    s.zeta = t >= 10.0 ? zeta_half_rs(t) : zeta_half_em(t, 1e-12);
    double m2 = s.zeta.real() * s.zeta.real() + s.zeta.imag() * s.zeta.imag();
    s.z4 = m2 * m2;
    return s;
}

}  // namespace zl
