#pragma once
#include <vector>

#include "zl/complex.hpp"
#include "zl/divisor.hpp"
#include "zl/types.hpp"

namespace zl {

// Coefficients of the Kober correction series sum_{n<=N} c_n sigma^n for
// L_1(2 sigma) - (gamma - log(4 pi sigma)) / (2 sin sigma).
struct KoberCoeffs {
    std::vector<double> c;  // c[0..N]
    int N = 0;
    double residual = 0.0;  // rms misfit on the fitting grid
};

// Kober's closed-form main term (gamma - log(4 pi sigma)) / (2 sin sigma),
// the sigma -> 0+ behaviour of L_1(2 sigma).  Domain 0 < sigma < pi/2.
double kober_main(double sigma);

// Least-squares fit of the Kober correction series of degree N against
// quadrature values of L_1(2 sigma).  Needs >= N + 3 distinct sigma values
// in (0, 0.5).
KoberCoeffs kober_fit(const std::vector<double>& sigmas, int N);

// Atkinson's expansion of L_1 in the strip 0 < Re s < pi:
//   -i e^{is/2} (log(2 pi) - gamma + (pi/2 - s) i)
//     + 2 pi e^{-is/2} sum_{n<=N} d(n) exp(-2 pi i n e^{-is}).
// Differs from L_1(s) by a bounded holomorphic remainder; err_estimate
// covers only the dropped geometric tail of the series.
LaplaceResult atkinson_l1(const Cplx& s, long n_terms,
                          const DivisorTable& dtable);

// Atkinson's Bessel-series expansion of L_2 for Re s > 0, |s| < pi:
//   4 pi e^{-is/2} sum_{n<=N} d_4(n) K_0(4 pi i sqrt(n) e^{-is/2}).
// Differs from L_2(s) by a remainder analytic in |s| < pi; err_estimate
// bounds the dropped tail through the K_0 magnitude envelope.
LaplaceResult atkinson_l2_k0(const Cplx& s, long n_terms,
                             const DivisorTable& d4table);

// (1/s)(A Log^4(1/s) + B Log^3(1/s) + C Log^2(1/s) + D Log(1/s) + E) with
// the principal branch; domain 0 < |s| <= 1, |arg s| < pi/2.
Cplx main_term(const Cplx& s, const MainTermCoeffs& coeffs);

// A and B exactly as the asymptotic formula prescribes, C = D = E = 0.
MainTermCoeffs paper_main_coeffs();

// Freeze A, B at their exact values and fit C, D, E by least squares of
// sigma L_2(sigma) - A L^4 - B L^3 against (L^2, L, 1), L = log(1/sigma).
// Needs >= 8 distinct sigma values in [1e-3, 0.3].
MainTermCoeffs fit_main_coeffs(const std::vector<double>& sigmas);

namespace detail {
struct PolyFit {
    std::vector<double> coeffs;  // ascending powers
    double residual = 0.0;       // rms misfit
};
// Least-squares polynomial fit of degree N through (xs, ys); throws
// IllConditionedError when the Vandermonde system is numerically singular.
PolyFit lsq_polyfit(const std::vector<double>& xs,
                    const std::vector<double>& ys, int N);
// Memoized quadrature values L_k(sigma) used by the fitting routines.
double cached_laplace_real(int k, double sigma, double tol);
}  // namespace detail

}  // namespace zl
