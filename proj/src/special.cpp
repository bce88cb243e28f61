// Gamma, log-Gamma and the modified Bessel function K0 on the complex plane.
//
// log_gamma: recurrence-shift into Re w >= 12, then the Stirling series with
// Bernoulli coefficients B_2..B_30.  At Re w >= 12 the first omitted term is
// below 1e-26, so the only real error sources are the accumulated shifts
// (~n*eps) and the final subtraction; both stay under ~3e-13 relative for
// |z| <= 100.
//
// gamma: exp(log_gamma) in the right half-plane, reflection through
// pi / (sin(pi z) Gamma(1-z)) otherwise.  sin(pi z) is computed as
// (-1)^n sin(pi(z-n)) with n = round(Re z) so accuracy does not collapse
// near the poles.
//
// bessel_k0 uses two evaluation paths glued at |z| = 6:
//
//   * ascending series  K0 = -(log(z/2)+gamma) I0(z) + sum_m H_m q^m/(m!)^2,
//     q = z^2/4.  The two pieces cancel: near |z|=6 the ratio I0/K0 is ~1e4
//     and the log factor is O(1), so an error d in log(z/2)+gamma shows up
//     amplified by I0/K0 ~ 5e4 in the result.  Plain double log would
//     contribute ~1e-9 relative error at the seam, which is why the whole
//     accumulation, including log|z|, runs in double-double.  log|z| is
//     derived from an exact |z|^2 (error-free products), power-of-two scaled,
//     and finished with the atanh series; arg z stays in double, where the
//     same amplification leaves its contribution below 1e-10.
//
//   * exponential form for Re z >= 0, |z| >= ~4:
//       K0(z) = sqrt(pi/(2z)) e^{-z} * (1/sqrt(pi)) Int e^{-v^2} (1+v^2/(2z))^{-1/2} dv
//     (substitute cosh t = 1 + v^2/z in the cosh-kernel integral).  The
//     integrand is analytic in the strip |Im v| < sqrt(2|z|) cos(arg z / 2),
//     so the trapezoid rule with step h = 0.2 converges geometrically:
//     error ~ e^{-2 pi d / h} < 1e-26 over the whole region used.  The sum is
//     truncated at v = 6.6 (e^{-43}).
//
// Left half-plane values come from the continuation formulas
//   K0(z e^{+i pi}) = K0(z) - i pi I0(z),  K0(z e^{-i pi}) = K0(z) + i pi I0(z),
// applied with -z in the right half-plane.  I0 itself is cheap: ascending
// series for |z| <= 6, trapezoid rule on (1/pi) Int_0^pi e^{z cos p} dp above.
#include "zl/special.hpp"

#include <cmath>
#include <cstdlib>

#include "zl/constants.hpp"
#include "zl/dd.hpp"
#include "zl/errors.hpp"

namespace zl {

Constants constants() {
    return {PI, EULER_GAMMA, ZETA_PRIME_2, LOG_2PI};
}

namespace {

// B_{2n}/((2n)(2n-1)) for n = 1..15, from the exact rationals.
constexpr double STIRLING_C[15] = {
    1.0 / 12,
    -1.0 / 360,
    1.0 / 1260,
    -1.0 / 1680,
    1.0 / 1188,
    -691.0 / 360360,
    1.0 / 156,
    -3617.0 / 122400,
    43867.0 / 244188,
    -174611.0 / 125400,
    77683.0 / 5796,
    -236364091.0 / 1506960,
    657931.0 / 300,
    -3392780147.0 / 93960,
    1723168255201.0 / 2492028,
};

Cplx stirling_log_gamma(const Cplx& w) {
    Cplx t = 1.0 / w;
    Cplx t2 = t * t;
    Cplx acc(STIRLING_C[14], 0.0);
    for (int n = 13; n >= 0; --n) acc = acc * t2 + STIRLING_C[n];
    return (w - 0.5) * std::log(w) - w + 0.5 * LOG_2PI + acc * t;
}

// (-1)^n sin(pi (z - n)), n = round(Re z): equals sin(pi z) but keeps full
// relative accuracy next to the real integers.
Cplx sin_pi(const Cplx& z) {
    double n = std::nearbyint(z.real());
    Cplx d = z - n;
    Cplx s = std::sin(PI * d);
    bool odd = std::fmod(std::fabs(n), 2.0) == 1.0;
    return odd ? -s : s;
}

}  // namespace

Cplx log_gamma(const Cplx& z) {
    require_finite(z, "log_gamma");
    if (z.imag() == 0.0 && z.real() <= 0.0)
        throw BranchCutError("log_gamma: argument on the cut (-inf, 0]");
    Cplx w = z;
    Cplx shift(0.0, 0.0);
    while (w.real() < 12.0) {
        shift += std::log(w);
        w += 1.0;
    }
    return stirling_log_gamma(w) - shift;
}

Cplx gamma(const Cplx& z) {
    require_finite(z, "gamma");
    if (z.imag() == 0.0 && z.real() <= 0.0 &&
        z.real() == std::nearbyint(z.real()))
        throw PoleError("gamma: pole at nonpositive integer");
    if (z.real() >= 0.5) return std::exp(log_gamma(z));
    return PI / (sin_pi(z) * std::exp(log_gamma(1.0 - z)));
}

namespace detail {

Cplx bessel_i0(const Cplx& z) {
    double az = std::abs(z);
    if (az <= 6.0) {
        Cplx q = z * z * 0.25;
        Cplx term(1.0, 0.0), sum(1.0, 0.0);
        for (int m = 1; m <= 60; ++m) {
            term *= q / static_cast<double>(m * m);
            sum += term;
            if (std::abs(term) < 1e-18 * std::abs(sum)) break;
        }
        return sum;
    }
    int n = static_cast<int>(1.6 * az) + 40;
    double h = PI / n;
    Cplx sum = 0.5 * (std::exp(z) + std::exp(-z));
    for (int j = 1; j < n; ++j) sum += std::exp(z * std::cos(j * h));
    return sum * (h / PI);
}

Cplx k0_series(const Cplx& z) {
    using dd::CDD;
    using dd::DD;
    // q = (z/2)^2 with error-free products.
    double hr = 0.5 * z.real(), hi = 0.5 * z.imag();
    CDD w{DD{hr, 0.0}, DD{hi, 0.0}};
    CDD q = dd::mul(w, w);
    CDD term{DD{1.0, 0.0}, DD{0.0, 0.0}};  // q^m / (m!)^2
    CDD s1 = term;                         // I0 series
    CDD s2{DD{0.0, 0.0}, DD{0.0, 0.0}};    // sum H_m q^m/(m!)^2
    DD harm{0.0, 0.0};
    for (int m = 1; m <= 120; ++m) {
        term = dd::div(dd::mul(term, q), static_cast<double>(m) * m);
        harm = dd::add(harm, dd::div(1.0, static_cast<double>(m)));
        s1 = dd::add(s1, term);
        s2 = dd::add(s2, dd::mul(term, harm));
        double tmag = std::fabs(term.re.hi) + std::fabs(term.im.hi);
        double smag = std::fabs(s1.re.hi) + std::fabs(s1.im.hi) +
                      std::fabs(s2.re.hi) + std::fabs(s2.im.hi) + 1.0;
        if (m >= 8 && tmag < 1e-36 * smag) break;
    }
    // log(z/2) + gamma; the imaginary part needs no extra precision.
    DD lre = dd::add(dd::sub(dd::log_mag(z), dd::LN2), dd::GAMMA);
    CDD lfull{lre, DD{std::atan2(z.imag(), z.real()), 0.0}};
    return dd::to_cplx(dd::sub(s2, dd::mul(lfull, s1)));
}

Cplx k0_exponential(const Cplx& z) {
    constexpr double h = 0.2;
    constexpr int J = 33;
    Cplx inv2z = 1.0 / (2.0 * z);
    Cplx g(1.0, 0.0);
    for (int j = 1; j <= J; ++j) {
        double v = j * h;
        g += 2.0 * std::exp(-v * v) / std::sqrt(1.0 + v * v * inv2z);
    }
    g *= h / std::sqrt(PI);
    return std::sqrt(PI / (2.0 * z)) * std::exp(-z) * g;
}

}  // namespace detail

Cplx bessel_k0(const Cplx& z) {
    require_finite(z, "bessel_k0");
    if (z == Cplx(0.0, 0.0)) throw DomainError("bessel_k0: singular at 0");
    if (z.real() < 0.0) {
        Cplx u = -z;
        Cplx k = bessel_k0(u);
        Cplx i0 = detail::bessel_i0(u);
        // z = u e^{+i pi} when Im z >= 0 (principal branch), u e^{-i pi} else.
        return z.imag() >= 0.0 ? k - Cplx(0.0, PI) * i0
                               : k + Cplx(0.0, PI) * i0;
    }
    return std::abs(z) <= 6.0 ? detail::k0_series(z)
                              : detail::k0_exponential(z);
}

}  // namespace zl
