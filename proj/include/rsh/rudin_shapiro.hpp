#pragma once

#include "rsh/detail/fft.hpp"
#include "rsh/detail/fit.hpp"
#include "rsh/errors.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <functional>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace rsh::rs {

enum class Branch { P, Q };

inline const char* to_string(Branch b) { return b == Branch::P ? "P" : "Q"; }

inline Branch parse_branch(const std::string& s)
{
    if (s == "P" || s == "p")
        return Branch::P;
    if (s == "Q" || s == "q")
        return Branch::Q;
    throw std::invalid_argument("unknown Rudin-Shapiro branch '" + s + "'");
}

using Sign = std::int8_t;

/// The first `length()` coefficients of a Rudin-Shapiro polynomial.
class RSSequence {
public:
    RSSequence(Branch branch, std::vector<Sign> values)
        : branch_(branch), values_(std::move(values))
    {
        if (values_.empty())
            throw std::invalid_argument("RSSequence: empty sequence");
    }

    Branch branch() const noexcept { return branch_; }
    std::size_t length() const noexcept { return values_.size(); }
    std::span<const Sign> values() const noexcept { return values_; }
    Sign operator[](std::size_t j) const noexcept { return values_[j]; }

private:
    Branch branch_;
    std::vector<Sign> values_;
};

// Unrolls P_{m+1} = P_m + x^{2^m} Q_m, Q_{m+1} = P_m - x^{2^m} Q_m on
// coefficient vectors: P_{m+1} = [P_m, Q_m], Q_{m+1} = [P_m, -Q_m].
// Returns the first n coefficients of the branch polynomial of the smallest
// length 2^m >= n.
inline RSSequence generate(std::size_t n, Branch branch = Branch::P)
{
    if (n == 0)
        throw std::invalid_argument("rs::generate: length must be positive");
    std::vector<Sign> p{1}, q{1};
    while (p.size() < n) {
        const std::size_t half = p.size();
        std::vector<Sign> np(2 * half), nq(2 * half);
        for (std::size_t i = 0; i < half; ++i) {
            np[i] = p[i];
            nq[i] = p[i];
            np[half + i] = q[i];
            nq[half + i] = static_cast<Sign>(-q[i]);
        }
        p = std::move(np);
        q = std::move(nq);
    }
    auto& src = branch == Branch::P ? p : q;
    src.resize(n);
    return {branch, std::move(src)};
}

// Truncated-window autocorrelation: sum of s[j] s[j+beta] over the j for
// which both indices lie in [0, n-1].
inline long autocorrelation(std::span<const Sign> seq, long beta)
{
    const long n = static_cast<long>(seq.size());
    if (std::labs(beta) >= n)
        throw std::invalid_argument("rs::autocorrelation: |beta| must be below the length");
    const long shift = std::labs(beta);
    long sum = 0;
    for (long j = 0; j + shift < n; ++j)
        sum += seq[static_cast<std::size_t>(j)] * seq[static_cast<std::size_t>(j + shift)];
    return sum;
}

inline long autocorrelation(const RSSequence& seq, long beta)
{
    return autocorrelation(seq.values(), beta);
}

// Drift tolerated between an FFT autocorrelation value and the nearest
// integer before the result is refused.
inline constexpr double kSpectrumRoundingTolerance = 0.25;

// All lags 0..n-1 at once in O(n log n); exact because the true values are
// integers.
inline std::vector<long> autocorr_spectrum(std::span<const Sign> seq)
{
    if (seq.empty())
        throw std::invalid_argument("rs::autocorr_spectrum: empty sequence");
    std::vector<double> x(seq.begin(), seq.end());
    const auto raw = detail::fft_autocorrelation(x);
    std::vector<long> out(raw.size());
    for (std::size_t b = 0; b < raw.size(); ++b) {
        const double r = std::nearbyint(raw[b]);
        if (std::abs(raw[b] - r) > kSpectrumRoundingTolerance)
            throw PrecisionError("rs::autocorr_spectrum: rounding drift " +
                                 std::to_string(std::abs(raw[b] - r)) + " at lag " +
                                 std::to_string(b));
        out[b] = static_cast<long>(r);
    }
    return out;
}

inline std::vector<long> autocorr_spectrum(const RSSequence& seq)
{
    return autocorr_spectrum(seq.values());
}

// max_{0<beta<n} |A(beta)| from a spectrum.
inline long max_offpeak(std::span<const long> spectrum)
{
    long m = 0;
    for (std::size_t b = 1; b < spectrum.size(); ++b)
        m = std::max(m, std::labs(spectrum[b]));
    return m;
}

struct GrowthPoint {
    std::size_t length;
    long max_abs_corr;
};

struct GrowthFit {
    double slope;
    double intercept;
    std::vector<GrowthPoint> points;
};

using SequenceSource = std::function<std::vector<Sign>(std::size_t)>;

// Least-squares fit of log max_{0<beta<n}|A(beta)| against log n.
inline GrowthFit autocorr_growth_exponent(std::span<const std::size_t> lengths,
                                          const SequenceSource& source)
{
    std::set<std::size_t> distinct(lengths.begin(), lengths.end());
    if (distinct.size() < 3)
        throw std::invalid_argument("rs::autocorr_growth_exponent: need at least 3 distinct lengths");
    if (*distinct.begin() < 2)
        throw std::invalid_argument("rs::autocorr_growth_exponent: lengths must be at least 2");

    GrowthFit fit{};
    std::vector<double> lx, ly;
    for (std::size_t n : distinct) {
        const auto seq = source(n);
        if (seq.size() != n)
            throw std::invalid_argument("rs::autocorr_growth_exponent: source returned wrong length");
        const long peak = max_offpeak(autocorr_spectrum(seq));
        fit.points.push_back({n, peak});
        if (peak > 0) {
            lx.push_back(std::log(static_cast<double>(n)));
            ly.push_back(std::log(static_cast<double>(peak)));
        }
    }
    const auto line = detail::least_squares(lx, ly);
    fit.slope = line.slope;
    fit.intercept = line.intercept;
    return fit;
}

inline GrowthFit autocorr_growth_exponent(std::span<const std::size_t> lengths,
                                          Branch branch = Branch::P)
{
    return autocorr_growth_exponent(lengths, [branch](std::size_t n) {
        const auto s = generate(n, branch);
        return std::vector<Sign>(s.values().begin(), s.values().end());
    });
}

// 2^lo, 2^(lo+1), ..., 2^hi
inline std::vector<std::size_t> dyadic_range(unsigned lo, unsigned hi)
{
    std::vector<std::size_t> out;
    for (unsigned m = lo; m <= hi; ++m)
        out.push_back(std::size_t{1} << m);
    return out;
}

} // namespace rsh::rs
