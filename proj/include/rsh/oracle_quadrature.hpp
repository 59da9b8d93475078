#pragma once

#include "rsh/detail/summation.hpp"
#include "rsh/harmonics.hpp"
#include "rsh/hopf_geometry.hpp"
#include "rsh/quadrature.hpp"
#include "rsh/rudin_shapiro.hpp"
#include "rsh/semiclassical.hpp"

#include <boost/multiprecision/cpp_int.hpp>

#include <cmath>
#include <complex>
#include <cstdlib>
#include <map>
#include <numbers>
#include <stdexcept>
#include <tuple>
#include <vector>

// Brute-force path on S^3: the basis functions and the operator image of
// the momentum part are sampled on a product grid and integrated
// numerically. Nothing here goes through the closed-form Gamma ratios used by
// rsh::semiclassical::matrix_element.
namespace rsh::oracle {

using hopf::HopfPoint;
using rs::Branch;
using semiclassical::MatrixElementReport;
using semiclassical::MonomialSymbol;

inline constexpr long kOracleMaxDegree = 64;

template <typename G>
std::complex<double> integrate_s3(G&& g, const QuadratureGrid& grid)
{
    return hopf::volume_integral(std::forward<G>(g), grid);
}

// Smallest grid meeting the exactness preconditions for a symbol at degree N.
inline QuadratureGrid minimal_grid(long N, const MonomialSymbol& s)
{
    return {static_cast<std::size_t>(2 * N + 2 * s.gamma + 2 * s.a + 8),
            static_cast<std::size_t>(2 * (2 * N + std::abs(s.beta1) + std::abs(s.beta2)) + 4)};
}

inline void check_grid(long N, const MonomialSymbol& s, const QuadratureGrid& grid)
{
    grid.validate();
    const auto need = minimal_grid(N, s);
    if (grid.n_psi < need.n_psi || grid.n_theta < need.n_theta)
        throw std::invalid_argument("matrix_element_quadrature: grid too small for this symbol and degree");
}

/// Samples of P_{N,k} and of Op_N(eta^a xi1^b1 xi2^b2) P_{N,k} on one
/// quadrature grid, reused across symbols that share (N, k, branch).
class QuadratureOracle {
public:
    QuadratureOracle(long N, long k, Branch branch, const QuadratureGrid& grid)
        : N_(N), k_(k), grid_(grid)
    {
        if (N < 1 || N > kOracleMaxDegree)
            throw std::invalid_argument("QuadratureOracle: N must lie in [1, 64]");
        if (k < 0 || k > N)
            throw std::invalid_argument("QuadratureOracle: k must lie in [0, N]");
        grid_.validate();
        const auto seq = rs::generate(static_cast<std::size_t>(N + 1), branch);

        // sigma_j e^{2 pi i jk/(N+1)} / (sqrt(N+1) ||z^j w^{N-j}||), the
        // norm taken from the exact rational.
        amplitude_.resize(static_cast<std::size_t>(N + 1));
        for (long j = 0; j <= N; ++j) {
            const auto norm = harmonics::monomial_norm_sq(N, j);
            const double inv_norm = std::sqrt((1 / *norm.exact).convert_to<double>());
            const double ang = hopf::two_pi * static_cast<double>((j * k) % (N + 1)) / static_cast<double>(N + 1);
            amplitude_[j] = std::polar(seq[static_cast<std::size_t>(j)] * inv_norm /
                                           std::sqrt(static_cast<double>(N + 1)),
                                       ang);
        }

        const auto rule = gauss_legendre(grid_.n_psi, 0.0, std::numbers::pi / 2);
        sin_.resize(grid_.n_psi);
        cos_.resize(grid_.n_psi);
        weight_.resize(grid_.n_psi);
        for (std::size_t i = 0; i < grid_.n_psi; ++i) {
            sin_[i] = std::sin(rule.nodes[i]);
            cos_[i] = std::cos(rule.nodes[i]);
            // (1/4pi^2) d rho d theta1 d theta2, d rho = 2 sin cos d psi; the
            // theta trapezoid contributes (2pi/n)^2.
            weight_[i] = rule.weights[i] * 2.0 * sin_[i] * cos_[i] /
                         static_cast<double>(grid_.n_theta * grid_.n_theta);
        }
        roots_.resize(grid_.n_theta);
        for (std::size_t m = 0; m < grid_.n_theta; ++m)
            roots_[m] = std::polar(1.0, hopf::two_pi * static_cast<double>(m) / static_cast<double>(grid_.n_theta));

        std::vector<std::vector<std::complex<double>>> radial(grid_.n_psi,
                                                              std::vector<std::complex<double>>(N + 1));
        for (std::size_t i = 0; i < grid_.n_psi; ++i)
            for (long j = 0; j <= N; ++j)
                radial[i][j] = amplitude_[j] * std::pow(sin_[i], static_cast<double>(j)) *
                               std::pow(cos_[i], static_cast<double>(N - j));
        basis_ = synthesize(radial);
    }

    long degree() const noexcept { return N_; }
    const QuadratureGrid& grid() const noexcept { return grid_; }

    // Value of P_{N,k} at node (i, m, n): rho = sin^2 psi_i, theta1 = 2 pi m / n_theta,
    // theta2 = 2 pi n / n_theta.
    std::complex<double> basis_at(std::size_t i, std::size_t m, std::size_t n) const
    {
        return basis_[index(i, m, n)];
    }

    MatrixElementReport matrix_element(const MonomialSymbol& s)
    {
        s.validate();
        check_grid(N_, s, grid_);
        MatrixElementReport rep;
        rep.method = semiclassical::Method::quadrature;
        rep.case_tag = semiclassical::classify(s);
        rep.N = N_;
        rep.k = k_;

        const auto excluded = divergent_components(s);
        for (bool e : excluded)
            rep.skipped_terms += e ? 1 : 0;
        const auto& product = image_times_conj_basis(s.a, s.b1, s.b2, excluded);

        const std::size_t nt = grid_.n_theta;
        auto wave = [&](long freq) {
            std::vector<std::complex<double>> out(nt);
            const long n = static_cast<long>(nt);
            for (std::size_t m = 0; m < nt; ++m)
                out[m] = roots_[static_cast<std::size_t>(((freq * static_cast<long>(m)) % n + n) % n)];
            return out;
        };
        const auto wave1 = wave(s.beta1), wave2 = wave(s.beta2);
        std::vector<std::complex<double>> rows(grid_.n_psi), inner(nt);
        std::vector<double> abs_rows(grid_.n_psi);
        double max_term = 0;
        for (std::size_t i = 0; i < grid_.n_psi; ++i) {
            const double w = weight_[i] * std::pow(sin_[i] * sin_[i], s.gamma);
            for (std::size_t m = 0; m < nt; ++m) {
                std::complex<double> acc = 0;
                for (std::size_t n = 0; n < nt; ++n)
                    acc += wave2[n] * product.values[index(i, m, n)];
                inner[m] = wave1[m] * acc;
            }
            rows[i] = w * rsh::detail::pairwise_sum<std::complex<double>>(inner);
            abs_rows[i] = w * product.row_abs_sum[i];
            max_term = std::max(max_term, w * product.row_abs_max[i]);
        }
        const auto integral = rsh::detail::pairwise_sum<std::complex<double>>(rows);
        const double abs_total = rsh::detail::pairwise_sum<double>(abs_rows);
        rep.value = s.coeff * integral;
        rep.max_term_magnitude = std::abs(s.coeff) * max_term;
        rep.cancellation_ratio = abs_total > 0 ? std::min(1.0, std::abs(integral) / abs_total) : 1.0;
        rep.precision_flag = rep.case_tag == semiclassical::SymbolCase::case3 &&
                             rep.cancellation_ratio < semiclassical::kCancellationFloor;
        return rep;
    }

private:
    struct Product {
        std::vector<std::complex<double>> values;   // Op(f2)P * conj(P) at every node
        std::vector<double> row_abs_sum;
        std::vector<double> row_abs_max;
    };

    std::size_t index(std::size_t i, std::size_t m, std::size_t n) const
    {
        return (i * grid_.n_theta + m) * grid_.n_theta + n;
    }

    // Sum_j radial[i][j] e^{ij theta1} e^{i(N-j) theta2} at every node.
    std::vector<std::complex<double>> synthesize(const std::vector<std::vector<std::complex<double>>>& radial) const
    {
        const std::size_t nt = grid_.n_theta;
        std::vector<std::complex<double>> out(grid_.n_psi * nt * nt);
        for (std::size_t i = 0; i < grid_.n_psi; ++i)
            for (std::size_t m = 0; m < nt; ++m)
                for (std::size_t n = 0; n < nt; ++n) {
                    std::complex<double> acc = 0;
                    for (long j = 0; j <= N_; ++j) {
                        if (radial[i][j] == 0.0)
                            continue;
                        const std::size_t r = (static_cast<std::size_t>(j) * m +
                                               static_cast<std::size_t>(N_ - j) * n) % nt;
                        acc += radial[i][j] * roots_[r];
                    }
                    out[index(i, m, n)] = acc;
                }
        return out;
    }

    // The component of Op(f2)P built on z^j w^{N-j} meets only the partner
    // l = j + beta1 after the angular integrals. It is dropped when one of its
    // Leibniz pieces, multiplied by the partner and rho^gamma, has a
    // non-integrable power of rho or (1 - rho).
    std::vector<bool> divergent_components(const MonomialSymbol& s) const
    {
        std::vector<bool> out(static_cast<std::size_t>(N_ + 1), false);
        for (long j = 0; j <= N_; ++j) {
            const long l = j + s.beta1;
            if (l < 0 || l > N_)
                continue;
            if ((s.b1 > 0 && j == 0) || (s.b2 > 0 && j == N_))
                continue;
            for (int a1 = 0; a1 <= s.a; ++a1) {
                const int a2 = s.a - a1;
                if (leibniz_coefficient(j, s.a, a1) == 0)
                    continue;
                // Exponents doubled to stay integral.
                const long rho_pow2 = (j - 2 * a1) + l + 2 * s.gamma;
                const long one_minus_pow2 = (N_ - j - 2 * a2) + (N_ - l);
                if (rho_pow2 <= -2 || one_minus_pow2 <= -2)
                    out[static_cast<std::size_t>(j)] = true;
            }
        }
        return out;
    }

    // C(a, a1) (j/2)_{a1} (-1)^{a2} ((N-j)/2)_{a2}: the coefficient of
    // rho^{j/2 - a1} (1-rho)^{(N-j)/2 - a2} in (d/drho)^a [rho^{j/2} (1-rho)^{(N-j)/2}].
    double leibniz_coefficient(long j, int a, int a1) const
    {
        const int a2 = a - a1;
        double c = 1;
        for (int i = 1; i <= a1; ++i)
            c = c * (a - a1 + i) / i;
        for (int i = 0; i < a1; ++i)
            c *= 0.5 * static_cast<double>(j) - i;
        for (int i = 0; i < a2; ++i)
            c *= -(0.5 * static_cast<double>(N_ - j) - i);
        return c;
    }

    const Product& image_times_conj_basis(int a, int b1, int b2, const std::vector<bool>& excluded)
    {
        auto key = std::make_tuple(a, b1, b2, excluded);
        if (auto it = cache_.find(key); it != cache_.end())
            return it->second;
        if (cache_.size() >= 16)
            cache_.clear();

        // Op(eta^a xi1^b1 xi2^b2) acts on each monomial term as
        // j^b1 (N-j)^b2 / (i^a N^{a+b1+b2}) times the a-th rho-derivative.
        static constexpr std::complex<double> minus_i_pow[4] = {{1, 0}, {0, -1}, {-1, 0}, {0, 1}};
        const double nd = static_cast<double>(N_);
        std::vector<std::vector<std::complex<double>>> radial(grid_.n_psi,
                                                              std::vector<std::complex<double>>(N_ + 1));
        for (long j = 0; j <= N_; ++j) {
            if (excluded[static_cast<std::size_t>(j)])
                continue;
            const double momentum = std::pow(static_cast<double>(j) / nd, b1) *
                                    std::pow(static_cast<double>(N_ - j) / nd, b2) / std::pow(nd, a);
            if (momentum == 0)
                continue;
            const auto scale = amplitude_[j] * momentum * minus_i_pow[a % 4];
            for (int a1 = 0; a1 <= a; ++a1) {
                const double c = leibniz_coefficient(j, a, a1);
                if (c == 0)
                    continue;
                const int a2 = a - a1;
                for (std::size_t i = 0; i < grid_.n_psi; ++i)
                    radial[i][j] += scale * c * std::pow(sin_[i], static_cast<double>(j - 2 * a1)) *
                                    std::pow(cos_[i], static_cast<double>(N_ - j - 2 * a2));
            }
        }
        auto image = synthesize(radial);

        Product prod;
        prod.values.resize(image.size());
        prod.row_abs_sum.assign(grid_.n_psi, 0.0);
        prod.row_abs_max.assign(grid_.n_psi, 0.0);
        const std::size_t per_row = grid_.n_theta * grid_.n_theta;
        for (std::size_t idx = 0; idx < image.size(); ++idx) {
            prod.values[idx] = image[idx] * std::conj(basis_[idx]);
            const double mag = std::abs(prod.values[idx]);
            prod.row_abs_sum[idx / per_row] += mag;
            prod.row_abs_max[idx / per_row] = std::max(prod.row_abs_max[idx / per_row], mag);
        }
        return cache_.emplace(std::move(key), std::move(prod)).first->second;
    }

    long N_;
    long k_;
    QuadratureGrid grid_;
    std::vector<std::complex<double>> amplitude_;
    std::vector<double> sin_, cos_, weight_;
    std::vector<std::complex<double>> roots_;
    std::vector<std::complex<double>> basis_;
    std::map<std::tuple<int, int, int, std::vector<bool>>, Product> cache_;
};

// <Op_N(f) P_{N,k}, P_{N,k}> as the integral over S^3 of
// [Op_N(eta^a xi1^b1 xi2^b2) P] * rho^gamma e^{i beta1 theta1} e^{i beta2 theta2} * conj(P).
inline MatrixElementReport matrix_element_quadrature(long N, long k, const MonomialSymbol& s,
                                                     const QuadratureGrid& grid, Branch branch = Branch::P)
{
    check_grid(N, s, grid);
    QuadratureOracle oracle(N, k, branch, grid);
    return oracle.matrix_element(s);
}

inline MatrixElementReport matrix_element_quadrature(long N, long k, const MonomialSymbol& s,
                                                     Branch branch = Branch::P)
{
    return matrix_element_quadrature(N, k, s, minimal_grid(N, s), branch);
}

// max_{k,l} |<P_k, P_l> - delta_kl| with every inner product integrated on
// the grid from pointwise evaluations of P_{N,k}.
inline double orthonormality_defect_quadrature(long N, Branch branch, const QuadratureGrid& grid)
{
    if (N < 0 || N > kOracleMaxDegree)
        throw std::invalid_argument("orthonormality_defect_quadrature: N must lie in [0, 64]");
    double defect = 0;
    for (long k = 0; k <= N; ++k)
        for (long l = k; l <= N; ++l) {
            const harmonics::HarmonicSpec pk{N, k, branch}, pl{N, l, branch};
            const auto ip = integrate_s3(
                [&](const HopfPoint& p) {
                    return harmonics::evaluate(pk, p) * std::conj(harmonics::evaluate(pl, p));
                },
                grid);
            defect = std::max(defect, std::abs(ip - (k == l ? 1.0 : 0.0)));
        }
    return defect;
}

} // namespace rsh::oracle
