#include "rsh/harmonics.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

using namespace rsh::harmonics;
using rsh::hopf::HopfPoint;
using rsh::rs::Branch;
using boost::multiprecision::cpp_rational;

TEST(Harmonics, MonomialNormExamples)
{
    EXPECT_EQ(*monomial_norm_sq(2, 1).exact, cpp_rational(1, 6));
    EXPECT_EQ(*monomial_norm_sq(0, 0).exact, cpp_rational(1));
    EXPECT_EQ(*monomial_norm_sq(4, 2).exact, cpp_rational(1, 30));
    EXPECT_NEAR(static_cast<double>(std::exp(monomial_norm_sq(4, 2).log_value)), 1.0 / 30, 1e-16);
    EXPECT_FALSE(monomial_norm_sq(1000, 3).exact.has_value());
    EXPECT_THROW(monomial_norm_sq(3, 4), std::invalid_argument);
    EXPECT_THROW(monomial_norm_sq(3, -1), std::invalid_argument);
}

TEST(Harmonics, EvaluateExamples)
{
    const double s2 = std::sqrt(2.0);
    EXPECT_NEAR(std::abs(evaluate({0, 0}, HopfPoint::make(0.3, 1, 2)) - 1.0), 0, 1e-15);
    EXPECT_NEAR(std::abs(evaluate({1, 0}, HopfPoint::make(1, 0, 0.7)) - 1.0), 0, 1e-15);
    EXPECT_NEAR(std::abs(evaluate({1, 0}, HopfPoint::make(0.5, 0, 0)) - s2), 0, 1e-15);
    EXPECT_THROW(evaluate({2, 3}, HopfPoint::make(0.5, 0, 0)), std::invalid_argument);
}

TEST(Harmonics, EvaluateMatchesDirectFormula)
{
    std::mt19937_64 gen(3);
    std::uniform_real_distribution<double> u(0, 1), t(0, rsh::hopf::two_pi);
    for (long N : {1L, 2L, 5L, 12L})
        for (long k = 0; k <= N; ++k)
            for (int trial = 0; trial < 20; ++trial) {
                const auto p = HopfPoint::make(u(gen), t(gen), t(gen));
                const auto seq = rsh::rs::generate(static_cast<std::size_t>(N + 1));
                std::complex<double> direct = 0;
                for (long j = 0; j <= N; ++j) {
                    const double inv_norm =
                        std::sqrt((1 / *monomial_norm_sq(N, j).exact).convert_to<double>());
                    direct += static_cast<double>(seq[j]) * inv_norm *
                              std::polar(1.0, rsh::hopf::two_pi * j * k / (N + 1)) * std::pow(p.z(), j) *
                              std::pow(p.w(), N - j);
                }
                direct /= std::sqrt(static_cast<double>(N + 1));
                ASSERT_NEAR(std::abs(evaluate({N, k}, p) - direct), 0, 1e-12);
            }
}

TEST(Harmonics, ProfileMatchesEvaluate)
{
    for (long N : {0L, 1L, 7L, 30L}) {
        const HarmonicSpec spec{N, N / 2, Branch::Q};
        const std::size_t M = 4 * (N + 1) + 3;
        const auto prof = evaluate_profile(spec, 0.37, M);
        ASSERT_EQ(prof.size(), M);
        for (std::size_t m = 0; m < M; ++m) {
            const auto direct = evaluate(spec, HopfPoint::make(0.37, rsh::hopf::two_pi * m / M, 0));
            ASSERT_NEAR(std::abs(prof[m] - direct), 0, 1e-12);
        }
    }
    EXPECT_THROW(evaluate_profile({3, 0}, 0.5, 15), std::invalid_argument);
}

TEST(Harmonics, ProfileExamples)
{
    for (auto v : evaluate_profile({0, 0}, 0.4, 8))
        EXPECT_NEAR(std::abs(v - 1.0), 0, 1e-15);
    double best = 0;
    for (auto v : evaluate_profile({1, 0}, 0.5, 64))
        best = std::max(best, std::abs(v));
    EXPECT_NEAR(best, std::sqrt(2.0), 1e-14);
}

TEST(Harmonics, SupNormExamples)
{
    EXPECT_EQ(sup_norm({0, 0}).value, 1.0);
    const auto r = sup_norm({1, 0});
    EXPECT_NEAR(r.value, std::sqrt(2.0), 1e-9);
    EXPECT_NEAR(r.argmax.rho, 0.5, 1e-4);
    // |z + w| is largest when theta1 = theta2.
    const double gap = rsh::hopf::reduce_angle(r.argmax.theta1 - r.argmax.theta2);
    EXPECT_LT(std::min(gap, rsh::hopf::two_pi - gap), 1e-4);
}

TEST(Harmonics, SupNormIsAttainedValue)
{
    for (long N : {5L, 33L}) {
        const HarmonicSpec spec{N, 2, Branch::P};
        const auto r = sup_norm(spec);
        EXPECT_NEAR(std::abs(evaluate(spec, r.argmax)), r.value, 1e-12);
        const auto prof = evaluate_profile(spec, 0.5, 4 * (N + 1));
        for (auto v : prof)
            EXPECT_LE(std::abs(v), r.value + 1e-12);
    }
}

TEST(Harmonics, MonomialSupnormRatioExamples)
{
    EXPECT_NEAR(monomial_supnorm_ratio(2, 1), 0.5 * std::sqrt(6.0), 1e-14);
    EXPECT_NEAR(monomial_supnorm_ratio(4, 2), 0.25 * std::sqrt(30.0), 1e-14);
    EXPECT_NEAR(monomial_supnorm_ratio(9, 0), std::sqrt(10.0), 1e-14);
    EXPECT_NEAR(monomial_supnorm_ratio(9, 9), std::sqrt(10.0), 1e-14);
    const double r = monomial_supnorm_ratio(100, 50);
    const double cited = std::sqrt(100.0) * std::pow(50.0, -0.25);
    EXPECT_GE(r / cited, 0.25);
    EXPECT_LE(r / cited, 4.0);
    EXPECT_THROW(monomial_supnorm_ratio(3, 5), std::invalid_argument);
}

TEST(Harmonics, OrthonormalityDefect)
{
    EXPECT_EQ(orthonormality_defect(0), 0.0);
    for (long N : {1L, 2L, 17L, 64L, 255L, 512L})
        for (Branch b : {Branch::P, Branch::Q})
            EXPECT_LE(orthonormality_defect(N, b), 1e-12) << N;
}

TEST(Harmonics, DftPhaseReducesModuloDimension)
{
    using detail::dft_phase;
    EXPECT_NEAR(std::abs(dft_phase(3, 5, 6) - dft_phase(1, 1, 6)), 0, 1e-15);
    EXPECT_NEAR(std::abs(dft_phase(-2, 1, 4) - dft_phase(3, 1, 4)), 0, 1e-15);
    EXPECT_NEAR(std::abs(dft_phase(1, 1, 3, -1) - std::conj(dft_phase(1, 1, 3))), 0, 1e-15);
}

TEST(Harmonics, AmbientHarmonicityExamples)
{
    EXPECT_LE(ambient_harmonicity_residual(1, 0, {0.3, -0.5, 0.7, 0.4}, 1e-3), 1e-8);
    const std::array<double, 4> x{0.5, 0.5, 0.5, 0.5};
    const double magnitude = 0.5;   // |z w| at x
    EXPECT_LE(ambient_harmonicity_residual(2, 1, x, 1e-3), 1e-6 * magnitude);
    EXPECT_THROW(ambient_harmonicity_residual(2, 3, x, 1e-3), std::invalid_argument);
    EXPECT_THROW(ambient_harmonicity_residual(2, 1, x, 0.0), std::invalid_argument);
}

// Random sweep. The central-difference error is h^2/12 times fourth
// derivatives, which for a degree-N monomial near the unit sphere are at most
// ~N^4 (1+2h)^N; rounding adds ~eps (1+2h)^N / h^2.
TEST(Harmonics, AmbientHarmonicitySweep)
{
    std::mt19937_64 gen(11);
    std::normal_distribution<double> g;
    std::uniform_int_distribution<long> deg(0, 20);
    const double h = 1e-3;
    for (int i = 0; i < 100; ++i) {
        std::array<double, 4> x{g(gen), g(gen), g(gen), g(gen)};
        const double r = std::sqrt(x[0] * x[0] + x[1] * x[1] + x[2] * x[2] + x[3] * x[3]);
        for (auto& c : x)
            c /= r;
        const long N = deg(gen);
        const long j = std::uniform_int_distribution<long>(0, N)(gen);
        const double growth = std::pow(1 + 2 * h, static_cast<double>(N));
        const double tol = h * h * std::pow(static_cast<double>(N), 4) * growth / 3 + 1e-8 * growth;
        EXPECT_LE(ambient_harmonicity_residual(N, j, x, h), tol) << "N=" << N << " j=" << j;
    }
}
