#include "rsh/rudin_shapiro.hpp"

#include <gtest/gtest.h>

#include <bit>
#include <vector>

using namespace rsh::rs;

namespace {

std::vector<Sign> values(const RSSequence& s) { return {s.values().begin(), s.values().end()}; }

long naive_autocorr(std::span<const Sign> x, long beta)
{
    long acc = 0;
    const long n = static_cast<long>(x.size());
    for (long j = 0; j + beta < n; ++j)
        acc += x[j] * x[j + beta];
    return acc;
}

} // namespace

TEST(RudinShapiro, GenerateSmallCases)
{
    EXPECT_EQ(values(generate(1, Branch::P)), (std::vector<Sign>{1}));
    EXPECT_EQ(values(generate(4, Branch::P)), (std::vector<Sign>{1, 1, 1, -1}));
    EXPECT_EQ(values(generate(8, Branch::Q)), (std::vector<Sign>{1, 1, 1, -1, -1, -1, 1, -1}));
    EXPECT_THROW(generate(0), std::invalid_argument);
}

// Independent oracle: sigma_j = (-1)^{number of "11" blocks in binary j}.
TEST(RudinShapiro, MatchesAdjacentOnesParity)
{
    constexpr std::size_t n = std::size_t{1} << 20;
    const auto seq = generate(n, Branch::P);
    for (std::size_t j = 0; j < n; ++j) {
        const int expected = std::popcount(j & (j >> 1)) % 2 == 0 ? 1 : -1;
        ASSERT_EQ(seq[j], expected) << "j = " << j;
    }
}

TEST(RudinShapiro, PrefixPropertyOfP)
{
    const auto long_seq = generate(1000, Branch::P);
    for (std::size_t n : {1u, 2u, 3u, 17u, 64u, 513u}) {
        const auto s = generate(n, Branch::P);
        for (std::size_t j = 0; j < n; ++j)
            ASSERT_EQ(s[j], long_seq[j]);
    }
}

TEST(RudinShapiro, QBlocksArePThenMinusQ)
{
    for (unsigned m = 0; m < 10; ++m) {
        const std::size_t half = std::size_t{1} << m;
        const auto p = generate(half, Branch::P), q = generate(half, Branch::Q), q2 = generate(2 * half, Branch::Q);
        for (std::size_t j = 0; j < half; ++j) {
            ASSERT_EQ(q2[j], p[j]);
            ASSERT_EQ(q2[half + j], -q[j]);
        }
    }
}

TEST(RudinShapiro, BranchRoundTrip)
{
    EXPECT_EQ(parse_branch("P"), Branch::P);
    EXPECT_EQ(parse_branch(to_string(Branch::Q)), Branch::Q);
    EXPECT_THROW(parse_branch("R"), std::invalid_argument);
}

TEST(RudinShapiro, AutocorrelationExamples)
{
    const std::vector<Sign> x{1, 1, 1, -1};
    EXPECT_EQ(autocorrelation(x, 0), 4);
    EXPECT_EQ(autocorrelation(x, 1), 1);
    const std::vector<Sign> y{1, 1, 1, -1, 1, 1, -1, 1};
    EXPECT_EQ(autocorrelation(y, 1), -1);
    EXPECT_THROW(autocorrelation(x, 4), std::invalid_argument);
    EXPECT_THROW(autocorrelation(x, -4), std::invalid_argument);
}

TEST(RudinShapiro, SpectrumExamples)
{
    const std::vector<Sign> x{1, 1, 1, -1};
    EXPECT_EQ(autocorr_spectrum(x), (std::vector<long>{4, 1, 0, -1}));
    const std::vector<Sign> one{1};
    EXPECT_EQ(autocorr_spectrum(one), (std::vector<long>{1}));
}

TEST(RudinShapiro, SpectrumMatchesDirectSums)
{
    for (Branch b : {Branch::P, Branch::Q})
        for (std::size_t n : {2u, 3u, 5u, 31u, 100u, 257u, 1024u}) {
            const auto seq = generate(n, b);
            const auto spec = autocorr_spectrum(seq);
            ASSERT_EQ(spec.size(), n);
            for (long beta = 0; beta < static_cast<long>(n); ++beta)
                ASSERT_EQ(spec[beta], naive_autocorr(seq.values(), beta)) << "n=" << n << " beta=" << beta;
        }
}

TEST(RudinShapiro, AutocorrelationIsSymmetricInShift)
{
    const auto seq = generate(200);
    for (long beta = 1; beta < 200; beta += 7)
        EXPECT_EQ(autocorrelation(seq, beta), autocorrelation(seq, -beta));
}

TEST(RudinShapiro, GrowthExponentBelowBound)
{
    const auto lengths = dyadic_range(6, 15);
    const auto fit = autocorr_growth_exponent(lengths, Branch::P);
    EXPECT_LT(fit.slope, 0.74);
    EXPECT_GT(fit.slope, 0.0);
    EXPECT_EQ(fit.points.size(), lengths.size());
}

TEST(RudinShapiro, GrowthExponentOfAllOnesIsOne)
{
    const SequenceSource ones = [](std::size_t n) { return std::vector<Sign>(n, 1); };
    const auto lengths = dyadic_range(6, 12);
    const auto fit = autocorr_growth_exponent(lengths, ones);
    // max_{beta != 0} |A(n, beta)| = n - 1
    EXPECT_NEAR(fit.slope, 1.0, 0.01);
}

TEST(RudinShapiro, GrowthExponentNeedsThreeLengths)
{
    const std::vector<std::size_t> two{64, 128};
    EXPECT_THROW(autocorr_growth_exponent(two, Branch::P), std::invalid_argument);
}
