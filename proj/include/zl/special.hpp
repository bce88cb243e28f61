#pragma once
#include "zl/complex.hpp"

namespace zl {

// Values of the shared mathematical constants, exposed for callers that need
// to agree with the library bit-for-bit.
struct Constants {
    double pi;
    double euler_gamma;
    double zeta_prime_2;
    double log_2pi;
};
Constants constants();

// Principal-branch log Gamma, continuous on vertical lines away from the cut
// (-inf, 0].  Throws BranchCutError on the cut.
Cplx log_gamma(const Cplx& z);

// Gamma via exp(log_gamma) / reflection.  Throws PoleError at 0, -1, -2, ...
Cplx gamma(const Cplx& z);

// Modified Bessel K0, principal branch.  Throws DomainError at 0.
Cplx bessel_k0(const Cplx& z);

namespace detail {
// The two K0 evaluation paths, exposed so the overlap region can be checked
// directly.  Both require Re z >= 0; the series path needs |z| small enough
// that the double-double accumulation absorbs the cancellation, the
// exponential path needs |z| >= ~4.
Cplx k0_series(const Cplx& z);
Cplx k0_exponential(const Cplx& z);
Cplx bessel_i0(const Cplx& z);
}  // namespace detail

}  // namespace zl
