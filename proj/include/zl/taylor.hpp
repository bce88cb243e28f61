#pragma once
#include <cmath>
#include <cstddef>
#include <vector>

// Dense truncated Taylor series over double, coefficient order low-to-high.
// Used where exact derivatives of composite functions are needed (the
// Riemann-Siegel correction terms).  The recurrences below propagate Taylor
// coefficients exactly (up to rounding); there is no truncation error at the
// expansion point itself.
namespace zl::taylor {

using Series = std::vector<double>;

inline Series mul(const Series& a, const Series& b, std::size_t deg) {
    Series c(deg + 1, 0.0);
    for (std::size_t i = 0; i <= deg && i < a.size(); ++i) {
        if (a[i] == 0.0) continue;
        std::size_t jmax = std::min(deg - i, b.size() ? b.size() - 1 : 0);
        for (std::size_t j = 0; j + 1 <= b.size() && j <= jmax; ++j)
            c[i + j] += a[i] * b[j];
    }
    return c;
}

// a / b with b[0] != 0.
inline Series div(const Series& a, const Series& b, std::size_t deg) {
    Series q(deg + 1, 0.0);
    for (std::size_t n = 0; n <= deg; ++n) {
        double s = n < a.size() ? a[n] : 0.0;
        for (std::size_t k = 1; k <= n && k < b.size(); ++k)
            s -= b[k] * q[n - k];
        q[n] = s / b[0];
    }
    return q;
}

// cos(u(x)) and sin(u(x)) for a polynomial u, via the ODE recurrences
//   n c_n = -sum_{k=1..n} k u_k s_{n-k},   n s_n = sum_{k=1..n} k u_k c_{n-k}.
inline void cos_sin(const Series& u, std::size_t deg, Series& c, Series& s) {
    c.assign(deg + 1, 0.0);
    s.assign(deg + 1, 0.0);
    c[0] = std::cos(u[0]);
    s[0] = std::sin(u[0]);
    for (std::size_t n = 1; n <= deg; ++n) {
        double cs = 0.0, ss = 0.0;
        for (std::size_t k = 1; k <= n && k < u.size(); ++k) {
            cs -= k * u[k] * s[n - k];
            ss += k * u[k] * c[n - k];
        }
        c[n] = cs / static_cast<double>(n);
        s[n] = ss / static_cast<double>(n);
    }
}

// m-th derivative of the truncated series at offset delta from the expansion
// point: f^(m)(x0+delta) = sum_{j>=m} T[j] * j!/(j-m)! * delta^(j-m).
inline double derivative_at(const Series& t, int m, double delta) {
    double acc = 0.0;
    for (int j = static_cast<int>(t.size()) - 1; j >= m; --j) {
        double perm = 1.0;
        for (int i = 0; i < m; ++i) perm *= static_cast<double>(j - i);
        acc = acc * delta + t[static_cast<std::size_t>(j)] * perm;
    }
    return acc;
}

}  // namespace zl::taylor
