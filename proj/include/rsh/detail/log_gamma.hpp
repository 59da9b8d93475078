#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

namespace rsh::detail {

// ln Γ(m/2) for integer m >= 1, i.e. on the half-integer lattice.
// Values are memoized per thread; every entry is computed directly by
// lgammal_r, never by recurrence, so the table carries no accumulated error.
inline long double log_gamma_half(long m)
{
    if (m < 1)
        throw std::domain_error("log_gamma_half: argument must be positive");
    thread_local std::vector<long double> table{0.0L};
    if (static_cast<std::size_t>(m) >= table.size()) {
        const std::size_t old = table.size();
        table.resize(static_cast<std::size_t>(m) + 1 + old / 2);
        for (std::size_t i = old; i < table.size(); ++i) {
            int sign = 0;
            table[i] = ::lgammal_r(static_cast<long double>(i) / 2.0L, &sign);
        }
    }
    return table[static_cast<std::size_t>(m)];
}

// ln n!
inline long double log_factorial(long n)
{
    if (n < 0)
        throw std::domain_error("log_factorial: negative argument");
    return log_gamma_half(2 * n + 2);
}

} // namespace rsh::detail
