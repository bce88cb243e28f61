#include "zl/quadrature.hpp"

#include <cmath>
#include <map>
#include <vector>

#include "zl/constants.hpp"
#include "zl/errors.hpp"

namespace zl {

const GaussRule& gauss_rule(int n) {
    static std::map<int, GaussRule> cache;
    auto it = cache.find(n);
    if (it != cache.end()) return it->second;
    GaussRule r;
    r.x.resize(n);
    r.w.resize(n);
    for (int i = 0; i < (n + 1) / 2; ++i) {
        // Newton from the Chebyshev-like initial guess
        double x = std::cos(PI * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int it2 = 0; it2 < 100; ++it2) {
            double p0 = 1.0, p1 = x;
            for (int j = 2; j <= n; ++j) {
                double p2 = ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p0) / j;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            double dx = p1 / dp;
            x -= dx;
            if (std::fabs(dx) < 1e-15) {
                // one clean-up iteration, then stop
                p0 = 1.0;
                p1 = x;
                for (int j = 2; j <= n; ++j) {
                    double p2 =
                        ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p0) / j;
                    p0 = p1;
                    p1 = p2;
                }
                dp = n * (x * p1 - p0) / (x * x - 1.0);
                x -= p1 / dp;
                break;
            }
        }
        r.x[i] = -x;
        r.x[n - 1 - i] = x;
        double w = 2.0 / ((1.0 - x * x) * dp * dp);
        r.w[i] = w;
        r.w[n - 1 - i] = w;
    }
    return cache.emplace(n, std::move(r)).first->second;
}

Cplx gauss_panel(const std::function<Cplx(double)>& f, double a, double b,
                 int points) {
    const GaussRule& r = gauss_rule(points);
    double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    Cplx acc(0.0, 0.0);
    for (int i = 0; i < points; ++i)
        acc += r.w[i] * f(mid + half * r.x[i]);
    return acc * half;
}

namespace {

struct March {
    const std::function<Cplx(double)>& f;
    int points;
    long max_panels;
    long panels = 0;
    double err = 0.0;
    std::vector<Cplx> leaves;

    void panel(double a, double b, double budget, int depth) {
        Cplx whole = gauss_panel(f, a, b, points);
        double mid = 0.5 * (a + b);
        Cplx left = gauss_panel(f, a, mid, points);
        Cplx right = gauss_panel(f, mid, b, points);
        Cplx fine = left + right;
        double diff = std::abs(whole - fine);
        double floor_rel = 5e-15 * std::abs(fine);
        if (diff <= std::max(budget, floor_rel) || depth >= 40) {
            if (++panels > max_panels)
                throw ConvergenceError(
                    "integrate_adaptive: panel limit exhausted");
            leaves.push_back(fine);
            err += diff;
            return;
        }
        panel(a, mid, 0.5 * budget, depth + 1);
        panel(mid, b, 0.5 * budget, depth + 1);
    }
};

Cplx pairwise(const std::vector<Cplx>& v, std::size_t lo, std::size_t hi) {
    if (hi - lo == 1) return v[lo];
    std::size_t mid = lo + (hi - lo) / 2;
    return pairwise(v, lo, mid) + pairwise(v, mid, hi);
}

}  // namespace

AdaptiveResult integrate_adaptive(const std::function<Cplx(double)>& f,
                                  double a, double b, double abs_tol,
                                  const std::function<double(double)>& width,
                                  int points, long max_panels) {
    if (!(b > a)) return {Cplx(0.0, 0.0), 0.0, 0};
    March m{f, points, max_panels, 0, 0.0, {}};
    double span = b - a;
    double pos = a;
    while (pos < b) {
        double w = std::min(width(pos), b - pos);
        w = std::max(w, 1e-9 * span);
        double hi = (b - pos < 1.5 * w) ? b : pos + w;
        m.panel(pos, hi, abs_tol * (hi - pos) / span, 0);
        pos = hi;
    }
    AdaptiveResult res;
    res.value = m.leaves.empty() ? Cplx(0.0, 0.0)
                                 : pairwise(m.leaves, 0, m.leaves.size());
    res.err = m.err;
    res.panels = m.panels;
    return res;
}

}  // namespace zl
