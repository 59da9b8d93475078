#pragma once

#include "rsh/detail/fit.hpp"
#include "rsh/detail/log_gamma.hpp"
#include "rsh/detail/parallel.hpp"
#include "rsh/detail/summation.hpp"
#include "rsh/harmonics.hpp"
#include "rsh/rudin_shapiro.hpp"

#include <cmath>
#include <complex>
#include <cstdlib>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace rsh::semiclassical {

using rs::Branch;

/// coeff * rho^gamma e^{i beta1 theta1} e^{i beta2 theta2} eta^a xi1^b1 xi2^b2
struct MonomialSymbol {
    int gamma = 0;
    int beta1 = 0;
    int beta2 = 0;
    int a = 0;
    int b1 = 0;
    int b2 = 0;
    std::complex<double> coeff{1.0, 0.0};

    void validate() const
    {
        if (gamma < 0 || a < 0 || b1 < 0 || b2 < 0)
            throw std::invalid_argument("MonomialSymbol: gamma, a, b1, b2 must be nonnegative");
    }
};

struct SymbolPolynomial {
    std::vector<MonomialSymbol> terms;
};

enum class SymbolCase { zero_selection, case1, case2, case3 };
enum class Method { closed_sum, quadrature };

inline const char* to_string(SymbolCase c)
{
    switch (c) {
    case SymbolCase::zero_selection: return "zero_selection";
    case SymbolCase::case1: return "case1";
    case SymbolCase::case2: return "case2";
    case SymbolCase::case3: return "case3";
    }
    return "?";
}

inline const char* to_string(Method m) { return m == Method::closed_sum ? "closed_sum" : "quadrature"; }

inline SymbolCase classify(const MonomialSymbol& s)
{
    if (s.beta1 != -s.beta2)
        return SymbolCase::zero_selection;
    if (s.a >= 1)
        return SymbolCase::case3;
    return s.beta1 == 0 ? SymbolCase::case1 : SymbolCase::case2;
}

// Case-3 results whose |value| / sum|terms| falls below this are flagged.
inline constexpr double kCancellationFloor = 1e-12;

struct MatrixElementReport {
    std::complex<double> value;
    SymbolCase case_tag = SymbolCase::zero_selection;
    long N = 0;
    long k = 0;
    double max_term_magnitude = 0;
    double cancellation_ratio = 1;   // |value| / sum |terms|, in [0, 1]
    Method method = Method::closed_sum;
    bool precision_flag = false;
    long skipped_terms = 0;          // j whose rho-integral diverges
};

/// x = sign * exp(log_abs); sign 0 encodes an exact zero.
struct SignedLog {
    int sign = 0;
    long double log_abs = -std::numeric_limits<long double>::infinity();

    long double value() const { return sign == 0 ? 0.0L : sign * std::exp(log_abs); }
};

// Integral over the Clifford-torus family of f(q, xi_rho):
// delta(a) delta(beta1) delta(beta2) * B(gamma + b1 + 1, b2 + 1).
inline std::complex<double> clifford_limit(const MonomialSymbol& s)
{
    s.validate();
    if (s.a != 0 || s.beta1 != 0 || s.beta2 != 0)
        return 0.0;
    using rsh::detail::log_factorial;
    const long p = s.gamma + s.b1, q = s.b2;
    const long double beta = std::exp(log_factorial(p) + log_factorial(q) - log_factorial(p + q + 1));
    return s.coeff * static_cast<double>(beta);
}

namespace detail {

// prod_{i<m} (x - i)
inline long double falling_factorial(long double x, int m)
{
    long double r = 1;
    for (int i = 0; i < m; ++i)
        r *= x - static_cast<long double>(i);
    return r;
}

inline long double binomial(int n, int k)
{
    long double r = 1;
    for (int i = 1; i <= k; ++i)
        r = r * static_cast<long double>(n - k + i) / static_cast<long double>(i);
    return r;
}

// The Leibniz split a1 + a2 = a of
//   int_0^1 (d/drho)^a [rho^{j/2} (1-rho)^{(N-j)/2}] rho^{j/2+gamma+beta/2} (1-rho)^{(N-j)/2-beta/2} drho
// as C(a,a1) (j/2)_{a1} (-1)^{a2} ((N-j)/2)_{a2} B(x1, x2) with
// x1 = j + gamma + beta/2 - a1 + 1 and x2 = N - j - beta/2 - a2 + 1.
// Splits with a vanishing coefficient are omitted. Throws std::domain_error
// when a surviving split has x1 <= 0 or x2 <= 0 (divergent integral).
inline std::vector<SignedLog> rho_integral_splits(long j, long N, int gamma, long beta, int a)
{
    std::vector<SignedLog> out;
    const long double p = static_cast<long double>(j) / 2, q = static_cast<long double>(N - j) / 2;
    for (int a1 = 0; a1 <= a; ++a1) {
        const int a2 = a - a1;
        long double coef = binomial(a, a1) * falling_factorial(p, a1) * falling_factorial(q, a2);
        if (a2 % 2 == 1)
            coef = -coef;
        if (coef == 0)
            continue;
        const long twice_x1 = 2 * j + 2 * gamma + beta - 2 * a1 + 2;
        const long twice_x2 = 2 * (N - j) - beta - 2 * a2 + 2;
        if (twice_x1 <= 0 || twice_x2 <= 0)
            throw std::domain_error("rho_integral: nonpositive Gamma argument at j = " + std::to_string(j));
        using rsh::detail::log_gamma_half;
        out.push_back({coef > 0 ? 1 : -1, std::log(std::abs(coef)) + log_gamma_half(twice_x1) +
                                              log_gamma_half(twice_x2) -
                                              log_gamma_half(twice_x1 + twice_x2)});
    }
    return out;
}

inline SignedLog combine(std::span<const SignedLog> terms)
{
    long double top = -std::numeric_limits<long double>::infinity();
    for (const auto& t : terms)
        if (t.sign != 0)
            top = std::max(top, t.log_abs);
    if (!std::isfinite(top))
        return {};
    rsh::detail::CompensatedSum<long double> acc;
    for (const auto& t : terms)
        if (t.sign != 0)
            acc.add(t.sign * std::exp(t.log_abs - top));
    const long double v = acc.value();
    if (v == 0)
        return {};
    return {v > 0 ? 1 : -1, top + std::log(std::abs(v))};
}

inline void check_symbol_args(long N, long k)
{
    if (N < 1)
        throw std::invalid_argument("matrix_element: N must be at least 1");
    if (k < 0 || k > N)
        throw std::invalid_argument("matrix_element: k must lie in [0, N]");
}

} // namespace detail

inline SignedLog rho_integral(long j, long N, int gamma, long beta, int a)
{
    if (N < 0 || j < 0 || j > N || gamma < 0 || a < 0)
        throw std::invalid_argument("rho_integral: need 0 <= j <= N and gamma, a >= 0");
    const auto splits = detail::rho_integral_splits(j, N, gamma, beta, a);
    return detail::combine(splits);
}

// <Op_N(f) P_{N,k}, P_{N,k}> for a monomial symbol via the reduced sum
//   coeff e^{-2 pi i k beta/(N+1)} N!/(i^a N^a) sum_j sigma_j sigma_{j+beta}
//   [j!(N-j)!(j+beta)!(N-j-beta)!]^{-1/2} (j/N)^b1 (1-j/N)^b2 I_j
// with I_j = rho_integral(j, N, gamma, beta, a). Every factor is carried in the
// log domain in long double and the signed terms (one per j and Leibniz
// split) are combined by compensated summation.
inline MatrixElementReport matrix_element(long N, long k, const MonomialSymbol& s,
                                          Branch branch = Branch::P)
{
    detail::check_symbol_args(N, k);
    s.validate();
    MatrixElementReport rep;
    rep.N = N;
    rep.k = k;
    rep.case_tag = classify(s);
    if (rep.case_tag == SymbolCase::zero_selection) {
        rep.value = 0.0;
        return rep;
    }

    using rsh::detail::log_factorial;
    const long beta = s.beta1;
    const auto seq = rs::generate(static_cast<std::size_t>(N + 1), branch);
    const long double log_n = std::log(static_cast<long double>(N));
    const long double base = log_factorial(N) - static_cast<long double>(s.a) * log_n;

    rsh::detail::CompensatedSum<long double> sum, abs_sum;
    long double max_term = 0;
    for (long j = std::max(0L, -beta); j <= std::min(N, N - beta); ++j) {
        if ((s.b1 > 0 && j == 0) || (s.b2 > 0 && j == N))
            continue;
        const long l = j + beta;
        std::vector<SignedLog> splits;
        try {
            splits = detail::rho_integral_splits(j, N, s.gamma, beta, s.a);
        } catch (const std::domain_error&) {
            ++rep.skipped_terms;
            continue;
        }
        long double lj = base - 0.5L * (log_factorial(j) + log_factorial(N - j) + log_factorial(l) +
                                        log_factorial(N - l));
        if (s.b1 > 0)
            lj += s.b1 * (std::log(static_cast<long double>(j)) - log_n);
        if (s.b2 > 0)
            lj += s.b2 * (std::log(static_cast<long double>(N - j)) - log_n);
        const int sig = seq[static_cast<std::size_t>(j)] * seq[static_cast<std::size_t>(l)];
        for (const auto& sp : splits) {
            const long double t = std::exp(lj + sp.log_abs);
            sum.add(sig * sp.sign * t);
            abs_sum.add(t);
            max_term = std::max(max_term, t);
        }
    }

    // coeff * e^{-2 pi i k beta / (N+1)} * (-i)^a
    static constexpr std::complex<double> minus_i_pow[4] = {{1, 0}, {0, -1}, {-1, 0}, {0, 1}};
    const auto phase = s.coeff * harmonics::detail::dft_phase(k, beta, N, -1) * minus_i_pow[s.a % 4];
    const long double total = sum.value();
    rep.value = phase * static_cast<double>(total);
    rep.max_term_magnitude = std::abs(s.coeff) * static_cast<double>(max_term);
    const long double denom = abs_sum.value();
    rep.cancellation_ratio =
        denom > 0 ? static_cast<double>(std::min(1.0L, std::abs(total) / denom)) : 1.0;
    rep.precision_flag = rep.case_tag == SymbolCase::case3 && rep.cancellation_ratio < kCancellationFloor;
    return rep;
}

inline std::complex<double> matrix_element_poly(long N, long k, const SymbolPolynomial& p,
                                                Branch branch = Branch::P)
{
    detail::check_symbol_args(N, k);
    std::complex<double> acc = 0;
    for (const auto& term : p.terms)
        acc += matrix_element(N, k, term, branch).value;
    return acc;
}

enum class KPolicy { zero, half, last };

inline long k_for(KPolicy policy, long N)
{
    switch (policy) {
    case KPolicy::zero: return 0;
    case KPolicy::half: return N / 2;
    case KPolicy::last: return N;
    }
    return 0;
}

struct ConvergenceRow {
    long N;
    long k;
    std::complex<double> value;
    double deviation;   // |value - clifford_limit|
    bool precision_flag;
};

struct ConvergenceStudy {
    std::vector<ConvergenceRow> rows;
    std::complex<double> limit;
    double slope = std::numeric_limits<double>::quiet_NaN();
    double intercept = std::numeric_limits<double>::quiet_NaN();
    std::size_t fitted_points = 0;
    bool exact = false;   // Case-1 symbol with b1 = b2 = 0 and every deviation < 1e-12
};

// Deviations below this count as exact for Case-1 position symbols.
inline constexpr double kExactDeviation = 1e-12;
// Points with N below this are treated as warm-up and left out of the fit.
inline constexpr long kFitWarmupN = 64;

// Deviation from the Clifford-torus limit over a list of degrees, with an
// unweighted log-log fit. Degrees are evaluated independently (up to `jobs`
// at a time) and rows are reported in the order given.
inline ConvergenceStudy convergence_study(const MonomialSymbol& s, std::span<const long> degrees,
                                          KPolicy policy = KPolicy::zero, Branch branch = Branch::P,
                                          unsigned jobs = 1)
{
    if (degrees.size() < 3)
        throw std::invalid_argument("convergence_study: need at least 3 degrees");
    s.validate();
    ConvergenceStudy study;
    study.limit = clifford_limit(s);
    study.rows = rsh::detail::parallel_map(degrees.size(), jobs, [&](std::size_t i) {
        const long N = degrees[i];
        const long k = k_for(policy, N);
        const auto rep = matrix_element(N, k, s, branch);
        return ConvergenceRow{N, k, rep.value, std::abs(rep.value - study.limit), rep.precision_flag};
    });

    if (classify(s) == SymbolCase::case1 && s.b1 == 0 && s.b2 == 0) {
        study.exact = true;
        for (const auto& r : study.rows)
            study.exact = study.exact && r.deviation < kExactDeviation;
        if (study.exact)
            return study;
    }

    std::vector<double> lx, ly, all_x, all_y;
    for (const auto& r : study.rows) {
        if (!(r.deviation > 0))
            continue;
        all_x.push_back(std::log(static_cast<double>(r.N)));
        all_y.push_back(std::log(r.deviation));
        if (r.N >= kFitWarmupN) {
            lx.push_back(all_x.back());
            ly.push_back(all_y.back());
        }
    }
    if (lx.size() < 2) {
        lx = all_x;
        ly = all_y;
    }
    if (lx.size() >= 2) {
        const auto fit = rsh::detail::least_squares(lx, ly);
        study.slope = fit.slope;
        study.intercept = fit.intercept;
        study.fitted_points = lx.size();
    }
    return study;
}

// max_j |[j!(N-j)!(j+beta)!(N-j-beta)!]^{-1/2} I_j| (N+gamma-a+1)! N / max(j,1)^gamma,
// the measured constant in the per-term bound C j^gamma / ((N+gamma-a+1)! N).
inline double case3_term_bound_check(long N, const MonomialSymbol& s)
{
    s.validate();
    if (s.a < 1)
        throw std::invalid_argument("case3_term_bound_check: symbol must have a >= 1");
    if (N < 1)
        throw std::invalid_argument("case3_term_bound_check: N must be at least 1");
    if (N + s.gamma - s.a + 1 < 0)
        throw std::invalid_argument("case3_term_bound_check: (N + gamma - a + 1)! undefined");
    if (s.beta1 != -s.beta2)
        return 0.0;
    using rsh::detail::log_factorial;
    const long beta = s.beta1;
    const long double scale = log_factorial(N + s.gamma - s.a + 1) + std::log(static_cast<long double>(N));
    long double best = 0;
    for (long j = std::max(0L, -beta); j <= std::min(N, N - beta); ++j) {
        SignedLog in;
        try {
            in = rho_integral(j, N, s.gamma, beta, s.a);
        } catch (const std::domain_error&) {
            continue;
        }
        if (in.sign == 0)
            continue;
        const long l = j + beta;
        const long double lv = in.log_abs -
                               0.5L * (log_factorial(j) + log_factorial(N - j) + log_factorial(l) +
                                       log_factorial(N - l)) +
                               scale - s.gamma * std::log(static_cast<long double>(std::max(j, 1L)));
        best = std::max(best, std::exp(lv));
    }
    return static_cast<double>(best);
}

} // namespace rsh::semiclassical
