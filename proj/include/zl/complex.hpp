#pragma once

#include <cmath>
#include <complex>

#include "zl/errors.hpp"

namespace zl {

using Cplx = std::complex<double>;

inline bool is_finite(double x) { return std::isfinite(x); }
inline bool is_finite(const Cplx& z) {
    return std::isfinite(z.real()) && std::isfinite(z.imag());
}

// Principal log, guarding the branch point.
inline Cplx log_principal(const Cplx& z) {
    if (z == Cplx(0.0, 0.0)) throw DomainError("log of zero");
    return std::log(z);
}

inline void require_finite(const Cplx& z, const char* what) {
    if (!is_finite(z)) throw RangeError(std::string(what) + ": non-finite value");
}
inline void require_finite(double x, const char* what) {
    if (!std::isfinite(x)) throw RangeError(std::string(what) + ": non-finite value");
}

}  // namespace zl
