#pragma once
#include <iosfwd>
#include <vector>

#include "zl/types.hpp"

namespace zl {

// One discrete-spectrum entry: eigenvalue parameter kappa (lambda = kappa^2
// + 1/4) and the combined weight multiplying its term in the spectral
// expansion. The two factors of the weight never appear separately.
struct SpectralDatum {
    double kappa = 0.0;
    double weight = 0.0;
};

// Immutable spectral table, strictly ascending in kappa; duplicate kappas
// (within 1e-9) are merged at parse time by adding weights.
struct SpectralTable {
    std::vector<SpectralDatum> data;
    double kappa_max = 0.0;
};

// Parse "kappa,weight" lines; '#' starts a comment anywhere on a line.
// Throws ParseError (malformed line, with line number), ValidationError
// (negative or nonpositive kappa, negative weight, no records).
SpectralTable parse_spectral_table(std::istream& in);

// The gamma-factor R(y) converting a spectral weight into the residue of
// the Mellin-type transform at 1/2 + iy:
//   sqrt(pi/2) * (2^{-iy} G(1/4 - iy/2)/G(1/4 + iy/2))^3 * G(2iy) * cosh(pi y)
// evaluated entirely in log space (the gamma factor underflows and the cosh
// overflows separately around |y| ~ 200 while the product is O(|y|^{-1/2})).
// Throws DomainError at y = 0 (gamma pole).
Cplx r_function(double y);

// Residue of the Mellin-type transform at 1/2 + i*kappa: r_function(kappa)
// times the merged weight stored for kappa. Throws NotFoundError when kappa
// is absent from the table (1e-9 matching tolerance).
Cplx residue_r0(double kappa, const SpectralTable& table);

// The discrete-spectrum sum of the theorem's expansion:
//   s^{-1/2} * sum_j w_j (s^{-i k_j} R(k_j) G(1/2 + i k_j)
//                         + s^{+i k_j} R(-k_j) G(1/2 - i k_j)),
// terms added in ascending-kappa order. err_estimate carries the
// table-truncation envelope ~ exp(-(pi/2 - |arg s|) kappa_max).
// Domain: 0 < |s| <= 1, |arg s| < pi/2.
LaplaceResult spectral_sum(const Cplx& s, const SpectralTable& table);

// Full theorem expansion: main_term(s, coeffs) + spectral_sum(s, table),
// tagged Method::theorem_spectral. The defect versus the true transform is
// the regular function G2(s).
LaplaceResult theorem_l2(const Cplx& s, const MainTermCoeffs& coeffs,
                         const SpectralTable& table);

struct G2Result {
    double residual = 0.0;  // |quadrature - theorem expansion|
    double envelope = 0.0;  // comparison envelope, see g2_residual
};

// Measured defect |L2(s) - theorem_l2(s)| together with the comparison
// envelope |s|^{-1/2} exp(-c log x / ((log log x)^{2/3} (log log log x)^{1/3}))
// at x = 1/|s| + 20; the shift keeps the nested logs positive on the whole
// domain (the bound is asymptotic and meaningless near |s| = 1 otherwise).
G2Result g2_residual(const Cplx& s, const MainTermCoeffs& coeffs,
                     const SpectralTable& table, double c_envelope = 0.1);

struct PartialSumReport {
    double max_ratio = 0.0;    // max over the K grid of S(K)/(K^2 log^c K)
    double trend_slope = 0.0;  // log-log slope of the ratio, top decade of K
    bool bounded = false;      // trend_slope <= 0.1
};

// Partial-sum growth check: S(K) = sum of weights with kappa <= K over a
// geometric K grid, compared against K^2 log^{c_exponent} K. The table must
// be nonempty (ValidationError otherwise).
PartialSumReport partial_sum_bound(const SpectralTable& table,
                                   double c_exponent);

}  // namespace zl
