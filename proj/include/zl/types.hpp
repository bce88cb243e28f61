#pragma once
#include <array>

#include "zl/complex.hpp"

namespace zl {

// How a Laplace-transform value was produced.
enum class Method {
    quadrature,
    kober,
    atkinson_series,
    k0_series,
    theorem_spectral,
};

inline const char* method_name(Method m) {
    switch (m) {
        case Method::quadrature: return "quadrature";
        case Method::kober: return "kober";
        case Method::atkinson_series: return "atkinson_series";
        case Method::k0_series: return "k0_series";
        case Method::theorem_spectral: return "theorem_spectral";
    }
    return "?";
}

struct LaplaceResult {
    Cplx s;
    int k = 2;
    Cplx value;
    Method method = Method::quadrature;
    double err_estimate = 0.0;  // absolute, best-effort bound
};

enum class CoeffProvenance { paper_exact, fitted };

// Coefficients of the quartic log-polynomial in the sigma->0 expansion of
// sigma * L2(sigma): A log^4(1/s) + B log^3(1/s) + C log^2 + D log + E.
// A and B have closed forms; C, D, E are only available by fitting.
struct MainTermCoeffs {
    double A = 0.0, B = 0.0, C = 0.0, D = 0.0, E = 0.0;
    CoeffProvenance provenance = CoeffProvenance::paper_exact;
};

// P4(x) = a4 x^4 + ... + a0, the polynomial in the mean-value asymptotic
// for the fourth moment; a[j] multiplies x^j.
struct P4Coeffs {
    std::array<double, 5> a{};
};

}  // namespace zl
