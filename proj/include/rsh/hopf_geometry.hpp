#pragma once

#include "rsh/detail/summation.hpp"
#include "rsh/quadrature.hpp"

#include <array>
#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace rsh::hopf {

inline constexpr double two_pi = 2.0 * std::numbers::pi;

inline double reduce_angle(double t)
{
    double r = std::fmod(t, two_pi);
    if (r < 0)
        r += two_pi;
    return r >= two_pi ? 0.0 : r;
}

/// Point of S^3 in Hopf coordinates: z = sqrt(rho) e^{i theta1},
/// w = sqrt(1 - rho) e^{i theta2}.
struct HopfPoint {
    double rho = 0;
    double theta1 = 0;
    double theta2 = 0;

    static HopfPoint make(double rho, double theta1, double theta2)
    {
        if (!(rho >= 0.0 && rho <= 1.0))
            throw std::invalid_argument("HopfPoint: rho must lie in [0, 1]");
        return {rho, reduce_angle(theta1), reduce_angle(theta2)};
    }

    std::complex<double> z() const { return std::polar(std::sqrt(rho), theta1); }
    std::complex<double> w() const { return std::polar(std::sqrt(1.0 - rho), theta2); }
};

/// Covector (eta, xi1, xi2) dual to (rho, theta1, theta2).
struct CotangentVector {
    double eta = 0;
    double xi1 = 0;
    double xi2 = 0;
};

/// The level set |z|^2 = rho.
struct CliffordTorus {
    double rho;

    explicit CliffordTorus(double r) : rho(r)
    {
        if (!(r >= 0.0 && r <= 1.0))
            throw std::invalid_argument("CliffordTorus: rho must lie in [0, 1]");
    }
};

inline std::array<double, 4> embed(const HopfPoint& p)
{
    const double a = std::sqrt(p.rho), b = std::sqrt(1.0 - p.rho);
    return {a * std::cos(p.theta1), a * std::sin(p.theta1), b * std::cos(p.theta2),
            b * std::sin(p.theta2)};
}

// Round cometric in Hopf coordinates. The metric is
// d rho^2 / (4 rho (1 - rho)) + rho d theta1^2 + (1 - rho) d theta2^2.
inline double cometric_norm_sq(const HopfPoint& p, const CotangentVector& v)
{
    const double rho = p.rho;
    double out = 4.0 * rho * (1.0 - rho) * v.eta * v.eta;
    if (v.xi1 != 0.0) {
        if (rho == 0.0)
            throw std::domain_error("cometric_norm_sq: xi1 is singular at rho = 0");
        out += v.xi1 * v.xi1 / rho;
    }
    if (v.xi2 != 0.0) {
        if (rho == 1.0)
            throw std::domain_error("cometric_norm_sq: xi2 is singular at rho = 1");
        out += v.xi2 * v.xi2 / (1.0 - rho);
    }
    return out;
}

// The unit covector (0, rho, 1 - rho) carrying the limiting measure on T_rho.
inline CotangentVector xi_rho(double rho)
{
    if (!(rho >= 0.0 && rho <= 1.0))
        throw std::invalid_argument("xi_rho: rho must lie in [0, 1]");
    return {0.0, rho, 1.0 - rho};
}

// Integral of g against the normalized volume (1/4pi^2) d rho d theta1 d theta2.
// With rho = sin^2 psi the measure becomes (1/4pi^2) sin(2 psi) d psi d theta1 d theta2.
template <typename G>
std::complex<double> volume_integral(G&& g, const QuadratureGrid& grid)
{
    grid.validate();
    const auto rule = gauss_legendre(grid.n_psi, 0.0, std::numbers::pi / 2);
    const double dtheta = two_pi / static_cast<double>(grid.n_theta);
    std::vector<std::complex<double>> rows(grid.n_psi);
    std::vector<std::complex<double>> samples(grid.n_theta * grid.n_theta);
    for (std::size_t i = 0; i < grid.n_psi; ++i) {
        const double psi = rule.nodes[i];
        const double s = std::sin(psi), c = std::cos(psi);
        const double rho = s * s;
        for (std::size_t a = 0; a < grid.n_theta; ++a)
            for (std::size_t b = 0; b < grid.n_theta; ++b)
                samples[a * grid.n_theta + b] = g(HopfPoint{rho, dtheta * static_cast<double>(a),
                                                            dtheta * static_cast<double>(b)});
        rows[i] = detail::pairwise_sum<std::complex<double>>(samples) * (rule.weights[i] * 2.0 * s * c);
    }
    const auto total = detail::pairwise_sum<std::complex<double>>(rows);
    const double n2 = static_cast<double>(grid.n_theta * grid.n_theta);
    return total / n2;
}

// Mean of g over T_rho against the probability measure (1/4pi^2) d theta1 d theta2.
template <typename G>
std::complex<double> torus_average(G&& g, const CliffordTorus& torus, std::size_t n_theta)
{
    if (n_theta < 1)
        throw std::invalid_argument("torus_average: need at least one node per angle");
    const double dtheta = two_pi / static_cast<double>(n_theta);
    std::complex<double> acc = 0;
    for (std::size_t a = 0; a < n_theta; ++a)
        for (std::size_t b = 0; b < n_theta; ++b)
            acc += g(HopfPoint{torus.rho, dtheta * static_cast<double>(a),
                               dtheta * static_cast<double>(b)});
    return acc / static_cast<double>(n_theta * n_theta);
}

} // namespace rsh::hopf
