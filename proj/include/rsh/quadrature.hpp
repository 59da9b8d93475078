#pragma once

#include <cmath>
#include <cstddef>
#include <numbers>
#include <stdexcept>
#include <utility>
#include <vector>

namespace rsh {

/// Product grid on S^3: Gauss-Legendre in psi on [0, pi/2] (rho = sin^2 psi)
/// and the uniform trapezoid rule in each angle.
struct QuadratureGrid {
    std::size_t n_psi = 32;
    std::size_t n_theta = 32;

    void validate() const
    {
        if (n_psi < 1 || n_theta < 1)
            throw std::invalid_argument("QuadratureGrid: node counts must be positive");
    }
};

struct GaussRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

// n-point Gauss-Legendre rule on [-1, 1]; Newton iteration on P_n from the
// Chebyshev-like initial guesses, nodes returned in increasing order.
inline GaussRule gauss_legendre(std::size_t n)
{
    if (n == 0)
        throw std::invalid_argument("gauss_legendre: need at least one node");

    // Returns (P_n(x), P_n'(x)) by the three-term recurrence.
    auto legendre = [n](double x) {
        double p0 = 1, p1 = x;
        for (std::size_t k = 2; k <= n; ++k) {
            const double p2 = ((2.0 * k - 1) * x * p1 - (k - 1.0) * p0) / static_cast<double>(k);
            p0 = p1;
            p1 = p2;
        }
        const double pn = p1, pm = n == 1 ? 1.0 : p0;
        return std::pair{pn, static_cast<double>(n) * (x * pn - pm) / (x * x - 1)};
    };

    GaussRule rule{std::vector<double>(n), std::vector<double>(n)};
    for (std::size_t i = 0; i < (n + 1) / 2; ++i) {
        double x = std::cos(std::numbers::pi * (static_cast<double>(i) + 0.75) /
                            (static_cast<double>(n) + 0.5));
        for (int iter = 0; iter < 100; ++iter) {
            const auto [p, dp] = legendre(x);
            const double dx = p / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16)
                break;
        }
        const double dp = legendre(x).second;
        const double w = 2.0 / ((1 - x * x) * dp * dp);
        rule.nodes[i] = -x;
        rule.nodes[n - 1 - i] = x;
        rule.weights[i] = w;
        rule.weights[n - 1 - i] = w;
    }
    if (n % 2 == 1)
        rule.nodes[n / 2] = 0.0;
    return rule;
}

// Gauss-Legendre mapped to [a, b].
inline GaussRule gauss_legendre(std::size_t n, double a, double b)
{
    auto rule = gauss_legendre(n);
    const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    for (std::size_t i = 0; i < n; ++i) {
        rule.nodes[i] = mid + half * rule.nodes[i];
        rule.weights[i] *= half;
    }
    return rule;
}

} // namespace rsh
