#pragma once
#include "zl/complex.hpp"

namespace zl {

// zeta(1/2 + it) by Euler-Maclaurin with a certified truncation remainder.
// Slow, high-accuracy reference path.  0 <= t <= 5000, target_tol >= 1e-13.
Cplx zeta_half_em(double t, double target_tol);

// zeta(1/2 + it) by the Riemann-Siegel formula with four correction terms;
// absolute error <= 1e-7 for 10 <= t <= 1e5.  Below t = 2000 the main sum is
// too short for that bound, so the call delegates to the reference path.
Cplx zeta_half_rs(double t);

// |zeta(1/2+it)|^4, fast path for t >= 10, reference path below.
double abs_zeta_pow4(double t);

// Riemann-Siegel theta: Im log_gamma(1/4 + it/2) - (t/2) log pi.
double rs_theta(double t);

struct CriticalLineSample {
    double t = 0.0;
    Cplx zeta;
    double z4 = 0.0;
};
CriticalLineSample sample_critical_line(double t);

}  // namespace zl
