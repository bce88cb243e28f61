#pragma once

namespace zl {

inline constexpr double PI = 3.14159265358979323846;
inline constexpr double TWO_PI = 6.28318530717958647692;
inline constexpr double EULER_GAMMA = 0.57721566490153286061;
// zeta'(2) = -sum log(n)/n^2
inline constexpr double ZETA_PRIME_2 = -0.93754825431584375370;
inline constexpr double LOG_2PI = 1.83787706640934548356;

}  // namespace zl
