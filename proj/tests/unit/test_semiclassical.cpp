#include "rsh/semiclassical.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

using namespace rsh::semiclassical;
using rsh::rs::Branch;

namespace {

MonomialSymbol sym(int g, int b1, int b2, int a, int x1, int x2) { return {g, b1, b2, a, x1, x2}; }

double factorial(long n)
{
    double f = 1;
    for (long i = 2; i <= n; ++i)
        f *= static_cast<double>(i);
    return f;
}

} // namespace

TEST(Semiclassical, ClassifyCases)
{
    EXPECT_EQ(classify(sym(3, 1, 0, 0, 0, 0)), SymbolCase::zero_selection);
    EXPECT_EQ(classify(sym(3, 0, 0, 0, 2, 1)), SymbolCase::case1);
    EXPECT_EQ(classify(sym(0, 2, -2, 0, 0, 0)), SymbolCase::case2);
    EXPECT_EQ(classify(sym(0, 0, 0, 1, 0, 0)), SymbolCase::case3);
}

TEST(Semiclassical, CliffordLimitExamples)
{
    EXPECT_NEAR(std::abs(clifford_limit({}) - 1.0), 0, 1e-15);
    EXPECT_NEAR(std::abs(clifford_limit(sym(1, 0, 0, 0, 0, 0)) - 0.5), 0, 1e-15);
    EXPECT_EQ(clifford_limit(sym(0, 1, -1, 0, 0, 0)), 0.0);
    EXPECT_EQ(clifford_limit(sym(0, 0, 0, 2, 0, 0)), 0.0);
    // B(gamma + b1 + 1, b2 + 1) = 2! 1! / 4!
    EXPECT_NEAR(std::abs(clifford_limit(sym(1, 0, 0, 0, 1, 1)) - 2.0 / 24), 0, 1e-15);
    EXPECT_THROW(clifford_limit(sym(-1, 0, 0, 0, 0, 0)), std::invalid_argument);
}

TEST(Semiclassical, RhoIntegralExamples)
{
    // a = 0, beta = 0: Beta(j + gamma + 1, N - j + 1)
    for (long N : {1L, 4L, 9L})
        for (long j = 0; j <= N; ++j)
            for (int g : {0, 1, 3}) {
                const double expected = factorial(j + g) * factorial(N - j) / factorial(N + g + 1);
                EXPECT_NEAR(static_cast<double>(rho_integral(j, N, g, 0, 0).value()), expected, 1e-15 * expected);
            }
    EXPECT_NEAR(static_cast<double>(rho_integral(0, 1, 0, 1, 0).value()), std::numbers::pi / 8, 1e-16);
    EXPECT_EQ(rho_integral(0, 0, 1, 0, 1).sign, 0);
    EXPECT_THROW(rho_integral(2, 1, 0, 0, 0), std::invalid_argument);
}

TEST(Semiclassical, UnitSymbolIsOne)
{
    for (long N : {1L, 2L, 10L, 100L, 5000L})
        for (long k : {0L, N / 2, N})
            EXPECT_NEAR(std::abs(matrix_element(N, k, {}).value - 1.0), 0, 1e-12);
}

TEST(Semiclassical, CaseOneTelescopes)
{
    for (long N : {1L, 3L, 64L, 777L, 2048L})
        for (int g = 0; g <= 8; ++g) {
            const auto r = matrix_element(N, N / 3, sym(g, 0, 0, 0, 0, 0), Branch::Q);
            EXPECT_NEAR(std::abs(r.value - 1.0 / (g + 1)), 0, 1e-12) << "N=" << N << " g=" << g;
            EXPECT_EQ(r.case_tag, SymbolCase::case1);
        }
}

TEST(Semiclassical, PinnedExamples)
{
    const auto r = matrix_element(1, 0, sym(0, 1, -1, 0, 0, 0));
    EXPECT_NEAR(r.value.real(), std::numbers::pi / 8, 1e-15);
    EXPECT_NEAR(r.value.imag(), 0, 1e-15);
    EXPECT_EQ(r.case_tag, SymbolCase::case2);
    for (long k : {0L, 4L, 10L})
        EXPECT_NEAR(std::abs(matrix_element(10, k, sym(0, 0, 0, 0, 1, 1)).value - 9.0 / 60), 0, 1e-14);
}

TEST(Semiclassical, ArgumentErrors)
{
    EXPECT_THROW(matrix_element(0, 0, {}), std::invalid_argument);
    EXPECT_THROW(matrix_element(4, 5, {}), std::invalid_argument);
    EXPECT_THROW(matrix_element(4, -1, {}), std::invalid_argument);
    EXPECT_THROW(matrix_element(4, 0, sym(0, 0, 0, -1, 0, 0)), std::invalid_argument);
}

TEST(Semiclassical, LinearInCoefficient)
{
    auto s = sym(1, 2, -2, 1, 1, 0);
    const auto base = matrix_element(20, 3, s).value;
    s.coeff = {2.0, -3.0};
    EXPECT_NEAR(std::abs(matrix_element(20, 3, s).value - std::complex<double>(2, -3) * base), 0, 1e-14);
}

TEST(Semiclassical, PolynomialExamples)
{
    SymbolPolynomial one_plus_rho{{sym(0, 0, 0, 0, 0, 0), sym(1, 0, 0, 0, 0, 0)}};
    for (long N : {1L, 8L, 300L})
        EXPECT_NEAR(std::abs(matrix_element_poly(N, 0, one_plus_rho) - 1.5), 0, 1e-12);
    EXPECT_EQ(matrix_element_poly(5, 0, SymbolPolynomial{}), 0.0);
    SymbolPolynomial cosine{{sym(0, 1, -1, 0, 0, 0), sym(0, -1, 1, 0, 0, 0)}};
    EXPECT_NEAR(std::abs(matrix_element_poly(1, 0, cosine) - std::numbers::pi / 4), 0, 1e-15);
}

TEST(Semiclassical, SelectionRuleSweep)
{
    std::mt19937_64 gen(5);
    std::uniform_int_distribution<int> small(0, 3), shift(-4, 4);
    std::uniform_int_distribution<long> deg(1, 200);
    int tested = 0;
    while (tested < 100) {
        auto s = sym(small(gen), shift(gen), shift(gen), small(gen), small(gen), small(gen));
        if (s.beta1 == -s.beta2)
            continue;
        const long N = deg(gen);
        const auto r = matrix_element(N, N / 2, s);
        ASSERT_EQ(r.value, 0.0);
        ASSERT_EQ(r.case_tag, SymbolCase::zero_selection);
        ++tested;
    }
}

TEST(Semiclassical, MagnitudeIndependentOfK)
{
    for (auto s : {sym(1, 1, -1, 0, 0, 0), sym(0, 2, -2, 1, 1, 0), sym(2, -3, 3, 2, 0, 1)})
        for (long N : {7L, 50L, 301L}) {
            const double ref = std::abs(matrix_element(N, 0, s).value);
            for (long k : {N / 2, N}) {
                const double m = std::abs(matrix_element(N, k, s).value);
                EXPECT_LE(std::abs(m - ref), 1e-12 * std::max(ref, 1e-300)) << N << " " << k;
            }
        }
}

TEST(Semiclassical, ConjugationSymmetryForPositionSymbols)
{
    for (int g : {0, 2})
        for (int b : {1, 2, 5})
            for (long N : {6L, 40L}) {
                const auto up = matrix_element(N, 3, sym(g, b, -b, 0, 0, 0), Branch::Q).value;
                const auto down = matrix_element(N, 3, sym(g, -b, b, 0, 0, 0), Branch::Q).value;
                EXPECT_NEAR(std::abs(down - std::conj(up)), 0, 1e-12 * std::max(1.0, std::abs(up)));
            }
}

TEST(Semiclassical, RiemannSumConsistency)
{
    for (int g = 0; g <= 3; ++g)
        for (int x1 = 0; x1 <= 3; ++x1)
            for (int x2 = 0; x2 <= 3; ++x2) {
                const auto s = sym(g, 0, 0, 0, x1, x2);
                for (long N : {16L, 64L, 1000L}) {
                    const double dev = std::abs(matrix_element(N, 0, s).value - clifford_limit(s));
                    EXPECT_LE(dev, 10.0 * (g + x1 + x2 + 1) / N);
                }
            }
}

TEST(Semiclassical, ConvergenceStudyExactCaseOne)
{
    const std::vector<long> degrees{1, 2, 4, 8, 16, 128};
    const auto st = convergence_study(sym(1, 0, 0, 0, 0, 0), degrees, KPolicy::zero);
    EXPECT_TRUE(st.exact);
    for (const auto& r : st.rows)
        EXPECT_LT(r.deviation, 1e-12);
}

TEST(Semiclassical, ConvergenceStudyCaseTwoDecays)
{
    std::vector<long> degrees;
    for (long n = 128; n <= 8192; n *= 2)
        degrees.push_back(n);
    const auto st = convergence_study(sym(0, 1, -1, 0, 0, 0), degrees, KPolicy::zero);
    EXPECT_FALSE(st.exact);
    EXPECT_LE(st.slope, -0.25);
    ASSERT_EQ(st.rows.size(), degrees.size());
    for (std::size_t i = 0; i < degrees.size(); ++i)
        EXPECT_EQ(st.rows[i].N, degrees[i]);
}

TEST(Semiclassical, ConvergenceStudyNeedsThreeDegrees)
{
    const std::vector<long> two{64, 128};
    EXPECT_THROW(convergence_study({}, two, KPolicy::zero), std::invalid_argument);
}

TEST(Semiclassical, ConvergenceStudyParallelMatchesSerial)
{
    const std::vector<long> degrees{64, 128, 256, 512};
    const auto s = sym(0, 2, -2, 0, 1, 0);
    const auto a = convergence_study(s, degrees, KPolicy::half, Branch::P, 1);
    const auto b = convergence_study(s, degrees, KPolicy::half, Branch::P, 3);
    ASSERT_EQ(a.rows.size(), b.rows.size());
    for (std::size_t i = 0; i < a.rows.size(); ++i)
        EXPECT_EQ(a.rows[i].value, b.rows[i].value);
    EXPECT_EQ(a.slope, b.slope);
}

// The pure eta symbol integrates a total derivative: its reduced sum is zero
// up to rounding, which the report flags as lost precision.
TEST(Semiclassical, PureEtaSumVanishes)
{
    for (long N : {128L, 1024L}) {
        const auto r = matrix_element(N, 0, sym(0, 0, 0, 1, 0, 0));
        EXPECT_LT(std::abs(r.value), 1e-15);
        EXPECT_TRUE(r.precision_flag);
        EXPECT_EQ(r.case_tag, SymbolCase::case3);
    }
}

// eta xi1 gives exactly 1/(2 i N): an honest O(1/N) case-3 decay.
TEST(Semiclassical, EtaXiOneDecaysLikeOneOverN)
{
    for (long N : {1L, 10L, 1000L}) {
        const auto v = matrix_element(N, 0, sym(0, 0, 0, 1, 1, 0)).value;
        EXPECT_NEAR(std::abs(v - std::complex<double>(0, -0.5 / N)), 0, 1e-14);
    }
    std::vector<long> degrees;
    for (long n = 128; n <= 8192; n *= 2)
        degrees.push_back(n);
    const auto st = convergence_study(sym(0, 0, 0, 1, 1, 0), degrees, KPolicy::zero);
    EXPECT_NEAR(st.slope, -1.0, 1e-6);
}

TEST(Semiclassical, TermBoundCheck)
{
    const auto s = sym(0, 0, 0, 1, 0, 0);
    const double c64 = case3_term_bound_check(64, s);
    EXPECT_TRUE(std::isfinite(c64));
    // The endpoint terms j = 0 and j = N carry the constant N/2.
    for (long N : {64L, 128L, 256L, 512L, 1024L})
        EXPECT_NEAR(case3_term_bound_check(N, s), N / 2.0, 1e-9 * N);
    EXPECT_THROW(case3_term_bound_check(64, sym(0, 0, 0, 0, 0, 0)), std::invalid_argument);
}

TEST(Semiclassical, KPolicy)
{
    EXPECT_EQ(k_for(KPolicy::zero, 9), 0);
    EXPECT_EQ(k_for(KPolicy::half, 9), 4);
    EXPECT_EQ(k_for(KPolicy::last, 9), 9);
}
