#pragma once

#include <cmath>
#include <cstddef>
#include <span>

namespace rsh::detail {

// Neumaier's variant of Kahan summation. The correction term also
// captures the case where the incoming value dominates the running sum.
template <typename T>
class CompensatedSum {
public:
    void add(T x) noexcept
    {
        const T t = sum_ + x;
        if (std::abs(sum_) >= std::abs(x))
            comp_ += (sum_ - t) + x;
        else
            comp_ += (x - t) + sum_;
        sum_ = t;
    }

    T value() const noexcept { return sum_ + comp_; }

private:
    T sum_{};
    T comp_{};
};

// Pairwise (cascade) summation with a fixed reduction tree, so results
// depend only on the input order.
template <typename T>
T pairwise_sum(std::span<const T> xs)
{
    constexpr std::size_t leaf = 32;
    if (xs.size() <= leaf) {
        T s{};
        for (const auto& x : xs)
            s += x;
        return s;
    }
    const std::size_t half = xs.size() / 2;
    return pairwise_sum(xs.first(half)) + pairwise_sum(xs.subspan(half));
}

} // namespace rsh::detail
