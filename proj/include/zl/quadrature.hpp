#pragma once
#include <functional>

#include "zl/complex.hpp"

namespace zl {

// Gauss-Legendre rule on [-1, 1], cached per point count.
struct GaussRule {
    std::vector<double> x, w;
};
const GaussRule& gauss_rule(int n);

struct AdaptiveResult {
    Cplx value;
    double err = 0.0;    // accumulated split-comparison bound
    long panels = 0;     // accepted leaf panels
};

// Adaptive panel integration of f over [a, b] to absolute tolerance abs_tol.
// The march starts panels of size width(x) (oscillation-aware caller hint);
// each panel is accepted when one rule application agrees with its two-half
// refinement, else split.  Leaf contributions are combined by fixed-order
// pairwise summation, so results are bit-deterministic.  Throws
// ConvergenceError when max_panels leaves are exceeded.
AdaptiveResult integrate_adaptive(const std::function<Cplx(double)>& f,
                                  double a, double b, double abs_tol,
                                  const std::function<double(double)>& width,
                                  int points, long max_panels);

// Single fixed-rule application on [a, b] (no error estimate).
Cplx gauss_panel(const std::function<Cplx(double)>& f, double a, double b,
                 int points);

}  // namespace zl
