#pragma once
#include <cmath>

#include "zl/complex.hpp"

// Minimal double-double (~31 significant digits) arithmetic.  Only the
// operations the ascending Bessel series needs are implemented; this is not a
// general extended-precision package.  Error-free transforms follow
// Dekker/Knuth; two_prod uses fma.
namespace zl::dd {

struct DD {
    double hi = 0.0;
    double lo = 0.0;
};

inline DD two_sum(double a, double b) {
    double s = a + b;
    double bb = s - a;
    double err = (a - (s - bb)) + (b - bb);
    return {s, err};
}

// Requires |a| >= |b| (or a == 0).
inline DD quick_two_sum(double a, double b) {
    double s = a + b;
    return {s, b - (s - a)};
}

inline DD two_prod(double a, double b) {
    double p = a * b;
    return {p, std::fma(a, b, -p)};
}

inline DD add(const DD& a, const DD& b) {
    DD s = two_sum(a.hi, b.hi);
    double lo = s.lo + a.lo + b.lo;
    return quick_two_sum(s.hi, lo);
}

inline DD add(const DD& a, double b) {
    DD s = two_sum(a.hi, b);
    return quick_two_sum(s.hi, s.lo + a.lo);
}

inline DD neg(const DD& a) { return {-a.hi, -a.lo}; }

inline DD sub(const DD& a, const DD& b) { return add(a, neg(b)); }

inline DD mul(const DD& a, const DD& b) {
    DD p = two_prod(a.hi, b.hi);
    double lo = p.lo + a.hi * b.lo + a.lo * b.hi;
    return quick_two_sum(p.hi, lo);
}

inline DD mul(const DD& a, double b) {
    DD p = two_prod(a.hi, b);
    return quick_two_sum(p.hi, p.lo + a.lo * b);
}

inline DD div(const DD& a, const DD& b) {
    double q1 = a.hi / b.hi;
    DD r = sub(a, mul(b, q1));
    double q2 = r.hi / b.hi;
    r = sub(r, mul(b, q2));
    double q3 = r.hi / b.hi;
    DD q = quick_two_sum(q1, q2);
    return add(q, q3);
}

inline DD div(double a, double b) { return div(DD{a, 0.0}, DD{b, 0.0}); }

inline DD div(const DD& a, double b) { return div(a, DD{b, 0.0}); }

inline double to_double(const DD& a) { return a.hi + a.lo; }

// Frozen high/low splits of the constants the series needs.
inline constexpr DD GAMMA{0.5772156649015329, -4.942915152430645e-18};
inline constexpr DD LN2{0.6931471805599453, 2.3190468138462996e-17};

// log|z| in double-double.  |z|^2 is formed with error-free products, scaled
// by a power of two into [1,2), reduced so the mantissa is within sqrt(2) of
// 1, and finished with the atanh series log m = 2 atanh((m-1)/(m+1)).
inline DD log_mag(const Cplx& z) {
    DD re2 = two_prod(z.real(), z.real());
    DD im2 = two_prod(z.imag(), z.imag());
    DD m2 = add(re2, im2);
    int e = 0;
    std::frexp(m2.hi, &e);  // m2 = f * 2^e, f in [0.5, 1)
    double scale = std::ldexp(1.0, 1 - e);
    DD m{m2.hi * scale, m2.lo * scale};  // in [1, 2), scaling is exact
    int k = e - 1;
    if (m.hi > 1.4142135623730951) {  // reduce to [1/sqrt2, sqrt2)
        m = DD{m.hi * 0.5, m.lo * 0.5};
        ++k;
    }
    // u = (m-1)/(m+1); m-1 is exact (Sterbenz range after reduction).
    DD u = div(add(m, -1.0), add(m, 1.0));
    DD u2 = mul(u, u);
    DD term = u;
    DD sum = u;
    for (int j = 3; j <= 45; j += 2) {
        term = mul(term, u2);
        DD contrib = div(term, static_cast<double>(j));
        sum = add(sum, contrib);
        if (std::fabs(contrib.hi) < 1e-35 * std::fabs(sum.hi)) break;
    }
    // log m2 = k*ln2 + 2*atanh-sum; log|z| = log(m2)/2.
    DD res = add(mul(LN2, static_cast<double>(k)), mul(sum, 2.0));
    return DD{res.hi * 0.5, res.lo * 0.5};
}

struct CDD {
    DD re, im;
};

inline CDD add(const CDD& a, const CDD& b) {
    return {add(a.re, b.re), add(a.im, b.im)};
}

inline CDD mul(const CDD& a, const CDD& b) {
    return {sub(mul(a.re, b.re), mul(a.im, b.im)),
            add(mul(a.re, b.im), mul(a.im, b.re))};
}

inline CDD sub(const CDD& a, const CDD& b) {
    return {sub(a.re, b.re), sub(a.im, b.im)};
}

inline CDD mul(const CDD& a, const DD& b) {
    return {mul(a.re, b), mul(a.im, b)};
}

inline CDD div(const CDD& a, double b) {
    return {div(a.re, b), div(a.im, b)};
}

inline Cplx to_cplx(const CDD& a) {
    return {to_double(a.re), to_double(a.im)};
}

}  // namespace zl::dd
