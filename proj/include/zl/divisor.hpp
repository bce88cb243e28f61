#pragma once
#include <cstdint>
#include <vector>

namespace zl {

// Dense divisor-function table: order 2 is d(n), order 4 is d4(n) (ordered
// four-factorizations).  Values are exact; the table is immutable once built.
struct DivisorTable {
    int order = 2;
    std::int64_t limit = 0;
    std::vector<std::uint32_t> values;  // index 1..limit; [0] unused

    std::uint32_t operator()(std::int64_t n) const {
        return values[static_cast<std::size_t>(n)];
    }
};

// O(N log N) sieve; order in {2, 4}, 1 <= limit <= 1e8.
DivisorTable divisor_sieve(int order, std::int64_t limit);

}  // namespace zl
