#pragma once
#include "zl/complex.hpp"
#include "zl/types.hpp"

namespace zl {

struct QuadratureConfig {
    double tol = 1e-6;          // target absolute tail+panel error
    double cutoff_factor = 1.5; // X = cutoff_factor * log(1/tol) / Re s
    long max_panels = 400000;
    int panel_points = 16;      // Gauss nodes per panel, >= 8
};

struct MomentRecord {
    double T = 0.0;
    double value = 0.0;  // I_k(T)
    int k = 2;
};

// L_k(s) = Int_0^inf |zeta(1/2+ix)|^{2k} e^{-sx} dx by adaptive panels on
// [0, X] plus a certified poly-log tail bound.  Re s > 0, k in {1,2}.
LaplaceResult laplace_quadrature(int k, const Cplx& s,
                                 const QuadratureConfig& cfg = {});

// I_k(T) = Int_0^T |zeta(1/2+ix)|^{2k} dx, absolute accuracy 1e-6 (1+T).
MomentRecord moment_integral(int k, double T);

// E2(T) = I_2(T) - T P4(log T).
double e2_error_term(double T, const P4Coeffs& coeffs);

// |L_k(1/T) - (1/T) Int_0^inf I_k(t) e^{-t/T} dt| with both sides computed
// by independent quadratures.
double laplace_identity_residual(int k, double T);

// I_k(T) <= e * L_k(1/T) + combined error estimates.
bool trivial_bound_check(int k, double T);

// Z2(w) = Int_1^inf |zeta(1/2+it)|^4 t^{-w} dt, Re w > 1.
Cplx mellin_z2(const Cplx& w);

// Laplace transform of E2: (L_2(s) - M(s)) / s, where M is the closed-form
// Laplace transform of d/dT [T P4(log T)] via log-moments of the kernel.
Cplx e2_laplace(const Cplx& s, const P4Coeffs& coeffs);

// Convert sigma-side main-term coefficients (of sigma L_2(sigma) in powers
// of log(1/sigma)) to the T-side polynomial P4 via the exact log-moment
// triangular system.
P4Coeffs p4_from_main_coeffs(const MainTermCoeffs& mc);

namespace detail {
struct MellinResult {
    Cplx value;
    double err = 0.0;
};
MellinResult mellin_z2_full(const Cplx& w);
// Int_0^inf log^j T e^{-sT} dT for j = 0..4, via Gamma-series log-moments.
Cplx log_moment(int j, const Cplx& s);
}  // namespace detail

}  // namespace zl
