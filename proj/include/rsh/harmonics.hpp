#pragma once

#include "rsh/detail/fft.hpp"
#include "rsh/detail/log_gamma.hpp"
#include "rsh/hopf_geometry.hpp"
#include "rsh/rudin_shapiro.hpp"

#include <boost/multiprecision/cpp_int.hpp>

#include <array>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <vector>

namespace rsh::harmonics {

using hopf::HopfPoint;
using rs::Branch;

/// Identifies P_{N,k}: degree N, basis index k in [0, N], sequence branch.
struct HarmonicSpec {
    long N = 0;
    long k = 0;
    Branch branch = Branch::P;

    void validate() const
    {
        if (N < 0)
            throw std::invalid_argument("HarmonicSpec: degree must be nonnegative");
        if (k < 0 || k > N)
            throw std::invalid_argument("HarmonicSpec: k must lie in [0, N]");
    }
};

// Largest degree for which exact rationals are produced.
inline constexpr long kExactRationalMaxDegree = 64;

struct MonomialNorm {
    std::optional<boost::multiprecision::cpp_rational> exact;
    long double log_value;
};

// ||z^j w^{N-j}||^2 = j! (N-j)! / (N+1)!
inline MonomialNorm monomial_norm_sq(long N, long j)
{
    if (N < 0 || j < 0 || j > N)
        throw std::invalid_argument("monomial_norm_sq: need 0 <= j <= N");
    MonomialNorm out{std::nullopt, rsh::detail::log_factorial(j) + rsh::detail::log_factorial(N - j) -
                                       rsh::detail::log_factorial(N + 1)};
    if (N <= kExactRationalMaxDegree) {
        using boost::multiprecision::cpp_int;
        auto fact = [](long n) {
            cpp_int f = 1;
            for (long i = 2; i <= n; ++i)
                f *= i;
            return f;
        };
        out.exact = boost::multiprecision::cpp_rational(fact(j) * fact(N - j), fact(N + 1));
    }
    return out;
}

namespace detail {

// e^{2 pi i j k / (N+1)} with the exponent reduced exactly before scaling.
inline std::complex<double> dft_phase(long j, long k, long N, int sign = 1)
{
    const long m = N + 1;
    const long r = (((j % m) * (k % m)) % m + m) % m;
    const double t = sign * hopf::two_pi * static_cast<double>(r) / static_cast<double>(m);
    return std::polar(1.0, t);
}

// Terms below exp(-kLogCutoff) relative to the largest are dropped in
// sup-norm scans; they cannot affect a relative 1e-12 result.
inline constexpr long double kLogCutoff = 60.0L;

// Per-degree data reused across many evaluations of the same P_{N,k}.
class HarmonicTable {
public:
    explicit HarmonicTable(const HarmonicSpec& spec) : N_(spec.N)
    {
        spec.validate();
        const auto seq = rs::generate(static_cast<std::size_t>(spec.N + 1), spec.branch);
        phase_.resize(static_cast<std::size_t>(N_ + 1));
        log_binom_.resize(static_cast<std::size_t>(N_ + 1));
        for (long j = 0; j <= N_; ++j) {
            phase_[j] = static_cast<double>(seq[static_cast<std::size_t>(j)]) * dft_phase(j, spec.k, N_);
            log_binom_[j] = 0.5L * (rsh::detail::log_factorial(N_) - rsh::detail::log_factorial(j) -
                                    rsh::detail::log_factorial(N_ - j));
        }
    }

    long degree() const noexcept { return N_; }

    // c_j(rho) with P(rho, theta1, theta2) = e^{iN theta2} sum_j c_j e^{ij(theta1 - theta2)}.
    // Entries below the cutoff are set to zero when `truncate` is set.
    std::vector<std::complex<double>> coefficients(double rho, bool truncate = false) const
    {
        std::vector<long double> logs(static_cast<std::size_t>(N_ + 1));
        const long double lr = rho > 0 ? std::log(static_cast<long double>(rho))
                                       : -std::numeric_limits<long double>::infinity();
        const long double l1 = rho < 1 ? std::log1p(-static_cast<long double>(rho))
                                       : -std::numeric_limits<long double>::infinity();
        long double top = -std::numeric_limits<long double>::infinity();
        for (long j = 0; j <= N_; ++j) {
            long double v = log_binom_[j];
            if (j > 0)
                v += 0.5L * static_cast<long double>(j) * lr;
            if (N_ - j > 0)
                v += 0.5L * static_cast<long double>(N_ - j) * l1;
            logs[j] = v;
            top = std::max(top, v);
        }
        std::vector<std::complex<double>> c(logs.size());
        for (std::size_t j = 0; j < logs.size(); ++j) {
            if (truncate && logs[j] < top - kLogCutoff)
                continue;
            c[j] = phase_[j] * static_cast<double>(std::exp(logs[j]));
        }
        return c;
    }

    // G(rho, phi) = sum_j c_j(rho) e^{ij phi} = P(rho, phi, 0).
    std::complex<double> profile_value(double rho, double phi) const
    {
        const auto c = coefficients(rho, true);
        std::complex<double> acc = 0;
        for (std::size_t j = 0; j < c.size(); ++j)
            if (c[j] != 0.0)
                acc += c[j] * std::polar(1.0, std::fmod(static_cast<double>(j) * phi, hopf::two_pi));
        return acc;
    }

private:
    long N_;
    std::vector<std::complex<double>> phase_;
    std::vector<long double> log_binom_;
};

} // namespace detail

// P_{N,k}(p) = (1/sqrt(N+1)) sum_j sigma_j e^{2 pi i jk/(N+1)} z^j w^{N-j} / ||z^j w^{N-j}||
inline std::complex<double> evaluate(const HarmonicSpec& spec, const HopfPoint& p)
{
    const detail::HarmonicTable table(spec);
    const auto c = table.coefficients(p.rho);
    std::complex<double> acc = 0;
    for (std::size_t j = 0; j < c.size(); ++j) {
        if (c[j] == 0.0)
            continue;
        const double jd = static_cast<double>(j);
        const double angle = std::fmod(jd * p.theta1, hopf::two_pi) +
                             std::fmod((static_cast<double>(spec.N) - jd) * p.theta2, hopf::two_pi);
        acc += c[j] * std::polar(1.0, angle);
    }
    return acc;
}

// P_{N,k}(rho, phi_m, 0) on phi_m = 2 pi m / M, m = 0..M-1, by one FFT.
// |P| depends on the angles only through theta1 - theta2.
inline std::vector<std::complex<double>> evaluate_profile(const HarmonicSpec& spec, double rho,
                                                          std::size_t phi_grid_size)
{
    spec.validate();
    if (phi_grid_size < static_cast<std::size_t>(4 * (spec.N + 1)))
        throw std::invalid_argument("evaluate_profile: phi grid must have at least 4(N+1) points");
    if (!(rho >= 0.0 && rho <= 1.0))
        throw std::invalid_argument("evaluate_profile: rho must lie in [0, 1]");
    const detail::HarmonicTable table(spec);
    rsh::detail::TrigSumEvaluator fft(phi_grid_size);
    const auto c = table.coefficients(rho);
    const auto v = fft(c);
    return {v.begin(), v.end()};
}

struct SupNormParams {
    std::size_t psi_points_per_degree = 4;   // psi grid: this many points per unit of N
    std::size_t phi_points_per_degree = 4;   // phi grid: this many points per unit of N+1
    int golden_iterations = 20;
    int refinement_rounds = 4;
};

struct SupNormResult {
    double value;
    HopfPoint argmax;
};

namespace detail {

template <typename F>
double golden_section_max(F&& f, double lo, double hi, int iterations, double& best_x)
{
    constexpr double inv_phi = 0.6180339887498949;
    double a = lo, b = hi;
    double c = b - inv_phi * (b - a), d = a + inv_phi * (b - a);
    double fc = f(c), fd = f(d);
    for (int it = 0; it < iterations; ++it) {
        if (fc >= fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    if (fc >= fd) {
        best_x = c;
        return fc;
    }
    best_x = d;
    return fd;
}

} // namespace detail

// Grid scan over (psi, phi) with rho = sin^2 psi, one FFT per psi row,
// then alternating golden-section refinement of |G|^2 around the best cell.
inline SupNormResult sup_norm(const HarmonicSpec& spec, const SupNormParams& params = {})
{
    spec.validate();
    if (spec.N == 0)
        return {1.0, HopfPoint{0.0, 0.0, 0.0}};

    const detail::HarmonicTable table(spec);
    const std::size_t n_psi = std::max<std::size_t>(2, params.psi_points_per_degree * spec.N);
    const std::size_t n_phi = params.phi_points_per_degree * static_cast<std::size_t>(spec.N + 1);
    const double dpsi = (std::numbers::pi / 2) / static_cast<double>(n_psi - 1);
    const double dphi = hopf::two_pi / static_cast<double>(n_phi);

    rsh::detail::TrigSumEvaluator fft(n_phi);
    double best = -1;
    double best_psi = 0, best_phi = 0;
    for (std::size_t i = 0; i < n_psi; ++i) {
        const double psi = dpsi * static_cast<double>(i);
        const double s = std::sin(psi);
        const double rho = i + 1 == n_psi ? 1.0 : s * s;
        const auto row = fft(table.coefficients(rho, true));
        for (std::size_t m = 0; m < n_phi; ++m) {
            const double v = std::norm(row[m]);
            if (v > best) {
                best = v;
                best_psi = psi;
                best_phi = dphi * static_cast<double>(m);
            }
        }
    }

    auto objective = [&](double psi, double phi) {
        const double s = std::sin(std::clamp(psi, 0.0, std::numbers::pi / 2));
        return std::norm(table.profile_value(s * s, phi));
    };
    double psi = best_psi, phi = best_phi;
    double half_psi = dpsi, half_phi = dphi;
    for (int round = 0; round < params.refinement_rounds; ++round) {
        double x = psi;
        const double lo = std::max(0.0, psi - half_psi), hi = std::min(std::numbers::pi / 2, psi + half_psi);
        double v = detail::golden_section_max([&](double t) { return objective(t, phi); }, lo, hi,
                                              params.golden_iterations, x);
        if (v > best) {
            best = v;
            psi = x;
        }
        v = detail::golden_section_max([&](double t) { return objective(psi, t); }, phi - half_phi,
                                       phi + half_phi, params.golden_iterations, x);
        if (v > best) {
            best = v;
            phi = x;
        }
        half_psi *= 0.5;
        half_phi *= 0.5;
    }
    const double s = std::sin(psi);
    return {std::sqrt(best), HopfPoint{s * s, hopf::reduce_angle(phi), 0.0}};
}

// max_rho rho^{j/2} (1-rho)^{(N-j)/2} / ||z^j w^{N-j}||, attained at rho = j/N.
inline double monomial_supnorm_ratio(long N, long j)
{
    if (N < 0 || j < 0 || j > N)
        throw std::invalid_argument("monomial_supnorm_ratio: need 0 <= j <= N");
    if (j == 0 || j == N)
        return std::sqrt(static_cast<double>(N + 1));
    const long double jd = j, nd = N, rest = N - j;
    const long double peak = 0.5L * (jd * std::log(jd / nd) + rest * std::log(rest / nd));
    const long double norm = 0.5L * (rsh::detail::log_factorial(N + 1) - rsh::detail::log_factorial(j) -
                                     rsh::detail::log_factorial(N - j));
    return static_cast<double>(std::exp(peak + norm));
}

// max_{k,l} |<P_{N,k}, P_{N,l}> - delta_{kl}| from the coefficient identity
// <P_k, P_l> = (1/(N+1)) sum_j sigma_j^2 e^{2 pi i j (k - l)/(N+1)}, using
// the orthogonality of the monomials z^j w^{N-j}. The Gram entry depends
// only on d = k - l, so each difference is evaluated once.
inline double orthonormality_defect(long N, Branch branch = Branch::P)
{
    if (N < 0)
        throw std::invalid_argument("orthonormality_defect: degree must be nonnegative");
    const auto seq = rs::generate(static_cast<std::size_t>(N + 1), branch);
    double defect = 0;
    for (long d = -N; d <= N; ++d) {
        std::complex<double> g = 0;
        const long shift = ((d % (N + 1)) + (N + 1)) % (N + 1);
        for (long j = 0; j <= N; ++j) {
            const double s = seq[static_cast<std::size_t>(j)];
            g += (s * s) * detail::dft_phase(j, shift, N);
        }
        g /= static_cast<double>(N + 1);
        defect = std::max(defect, std::abs(g - (d == 0 ? 1.0 : 0.0)));
    }
    return defect;
}

namespace detail {

inline std::complex<double> ipow(std::complex<double> x, long n)
{
    std::complex<double> r = 1;
    for (long i = 0; i < n; ++i)
        r *= x;
    return r;
}

} // namespace detail

// Central-difference Laplacian on R^4 of z^j w^{N-j} at x; returns
// max(|Re|, |Im|). Harmonicity of this homogeneous polynomial is what makes
// its restriction an eigenfunction with eigenvalue -N(N+2) on S^3.
inline double ambient_harmonicity_residual(long N, long j, const std::array<double, 4>& x, double h)
{
    if (N < 0 || j < 0 || j > N)
        throw std::invalid_argument("ambient_harmonicity_residual: need 0 <= j <= N");
    if (!(h > 0))
        throw std::invalid_argument("ambient_harmonicity_residual: step must be positive");
    auto f = [&](const std::array<double, 4>& q) {
        const std::complex<double> z(q[0], q[1]), w(q[2], q[3]);
        return detail::ipow(z, j) * detail::ipow(w, N - j);
    };
    const auto center = f(x);
    std::complex<double> lap = 0;
    for (int d = 0; d < 4; ++d) {
        auto up = x, down = x;
        up[d] += h;
        down[d] -= h;
        lap += f(up) - 2.0 * center + f(down);
    }
    lap /= h * h;
    return std::max(std::abs(lap.real()), std::abs(lap.imag()));
}

} // namespace rsh::harmonics
