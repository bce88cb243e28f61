#include "zl/divisor.hpp"

#include "zl/errors.hpp"

namespace zl {

DivisorTable divisor_sieve(int order, std::int64_t limit) {
    if (order != 2 && order != 4)
        throw DomainError("divisor_sieve: order must be 2 or 4");
    if (limit < 1 || limit > 100000000)
        throw CapacityError("divisor_sieve: limit outside [1, 1e8]");
    auto n = static_cast<std::size_t>(limit);
    DivisorTable t;
    t.order = order;
    t.limit = limit;
    std::vector<std::uint32_t> d2(n + 1, 0);
    for (std::size_t i = 1; i <= n; ++i)
        for (std::size_t j = i; j <= n; j += i) ++d2[j];
    if (order == 2) {
        t.values = std::move(d2);
        return t;
    }
    // d4 = d2 * d2 (Dirichlet convolution)
    std::vector<std::uint32_t> d4(n + 1, 0);
    for (std::size_t i = 1; i <= n; ++i) {
        std::uint32_t di = d2[i];
        for (std::size_t j = i, q = 1; j <= n; j += i, ++q)
            d4[j] += di * d2[q];
    }
    t.values = std::move(d4);
    return t;
}

}  // namespace zl
