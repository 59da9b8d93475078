#pragma once

// Acceptance criteria as runnable checks. Shared by the acceptance test
// binary and the `verify` CLI subcommand; every threshold is pinned here.

#include "rsh/detail/fit.hpp"
#include "rsh/detail/parallel.hpp"
#include "rsh/harmonics.hpp"
#include "rsh/hopf_geometry.hpp"
#include "rsh/oracle_quadrature.hpp"
#include "rsh/rudin_shapiro.hpp"
#include "rsh/semiclassical.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace rsh::verify {

struct CriterionResult {
    int id = 0;
    std::string name;
    bool passed = false;
    bool precision_flag = false;
    double seconds = 0;
    std::string detail;
};

struct Options {
    std::optional<double> tol;   // overrides the criterion's exactness tolerance where one applies
    unsigned jobs = 1;
};

namespace detail {

inline std::string fmt(double x)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6g", x);
    return buf;
}

// {0, floor(N/2), N} without duplicates.
inline std::vector<long> probe_ks(long N)
{
    std::set<long> ks{0, N / 2, N};
    return {ks.begin(), ks.end()};
}

using Clock = std::chrono::steady_clock;

inline double seconds_since(Clock::time_point t0)
{
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

} // namespace detail

using semiclassical::MonomialSymbol;

// 1. Case-1 exactness: value = 1/(gamma+1) for every N <= 2048.
inline CriterionResult exact_case1(const Options& opt = {})
{
    const double tol = opt.tol.value_or(1e-12);
    const double budget = 30.0;
    const auto t0 = detail::Clock::now();
    constexpr long max_n = 2048;
    const auto worst = rsh::detail::parallel_map(max_n, opt.jobs, [](std::size_t idx) {
        const long N = static_cast<long>(idx) + 1;
        double w = 0;
        for (long k : detail::probe_ks(N))
            for (int g = 0; g <= 5; ++g) {
                const auto rep = semiclassical::matrix_element(N, k, MonomialSymbol{g, 0, 0, 0, 0, 0});
                w = std::max(w, std::abs(rep.value - 1.0 / (g + 1)));
            }
        return w;
    });
    const double err = *std::max_element(worst.begin(), worst.end());
    CriterionResult r{1, "exact Case-1 identity", false, false, detail::seconds_since(t0), {}};
    r.passed = err <= tol && r.seconds < budget;
    r.detail = "max |value - 1/(gamma+1)| = " + detail::fmt(err) + " (tol " + detail::fmt(tol) +
               "), runtime " + detail::fmt(r.seconds) + " s (budget 30 s)";
    return r;
}

// 2. Closed sum against brute-force quadrature for N <= 12 and all small symbols.
inline CriterionResult oracle_equivalence(const Options& opt = {})
{
    const double tol = opt.tol.value_or(1e-8);
    const double budget = 300.0;
    const auto t0 = detail::Clock::now();

    struct Task {
        long N, k;
    };
    std::vector<Task> tasks;
    for (long N = 1; N <= 12; ++N)
        for (long k : detail::probe_ks(N))
            tasks.push_back({N, k});

    struct Outcome {
        double worst = 0;
        long count = 0;
        std::string where;
    };
    const auto outcomes = rsh::detail::parallel_map(tasks.size(), opt.jobs, [&](std::size_t t) {
        const auto [N, k] = tasks[t];
        const MonomialSymbol widest{2, 2, 2, 2, 0, 0};
        oracle::QuadratureOracle quad(N, k, rs::Branch::P, oracle::minimal_grid(N, widest));
        Outcome o;
        for (int a = 0; a <= 2; ++a)
            for (int b1 = 0; b1 <= 2; ++b1)
                for (int b2 = 0; b2 <= 2; ++b2)
                    for (int g = 0; g <= 2; ++g)
                        for (int be1 = -2; be1 <= 2; ++be1)
                            for (int be2 = -2; be2 <= 2; ++be2) {
                                const MonomialSymbol s{g, be1, be2, a, b1, b2};
                                const auto closed = semiclassical::matrix_element(N, k, s).value;
                                const auto q = quad.matrix_element(s).value;
                                const double rel = std::abs(q - closed) / (1.0 + std::abs(closed));
                                ++o.count;
                                if (rel > o.worst) {
                                    o.worst = rel;
                                    std::ostringstream w;
                                    w << "N=" << N << " k=" << k << " (" << g << "," << be1 << "," << be2
                                      << "," << a << "," << b1 << "," << b2 << ")";
                                    o.where = w.str();
                                }
                            }
        return o;
    });
    Outcome total;
    for (const auto& o : outcomes) {
        total.count += o.count;
        if (o.worst >= total.worst) {
            total.worst = o.worst;
            total.where = o.where;
        }
    }
    CriterionResult r{2, "oracle equivalence", false, false, detail::seconds_since(t0), {}};
    r.passed = total.worst <= tol && r.seconds < budget;
    r.detail = std::to_string(total.count) + " comparisons, max |quad - closed|/(1+|closed|) = " +
               detail::fmt(total.worst) + " at " + total.where + " (tol " + detail::fmt(tol) + "), runtime " +
               detail::fmt(r.seconds) + " s (budget 300 s)";
    return r;
}

// 3. N = 1, k = 0, e^{i(theta1 - theta2)}: pi/8 by both routes.
inline CriterionResult pinned_value(const Options& = {})
{
    const auto t0 = detail::Clock::now();
    const MonomialSymbol s{0, 1, -1, 0, 0, 0};
    const double expected = std::numbers::pi / 8;
    const double e_closed = std::abs(semiclassical::matrix_element(1, 0, s).value - expected);
    const double e_quad = std::abs(oracle::matrix_element_quadrature(1, 0, s).value - expected);
    CriterionResult r{3, "pinned value pi/8", false, false, detail::seconds_since(t0), {}};
    r.passed = e_closed <= 1e-12 && e_quad <= 1e-10;
    r.detail = "closed-sum error " + detail::fmt(e_closed) + " (tol 1e-12), quadrature error " +
               detail::fmt(e_quad) + " (tol 1e-10)";
    return r;
}

inline std::vector<long> decay_degrees()
{
    std::vector<long> out;
    for (int m = 7; m <= 13; ++m)
        out.push_back(1L << m);
    return out;
}

// 4. Off-diagonal (beta != 0) matrix elements decay.
inline CriterionResult case2_decay(const Options& opt = {})
{
    const auto t0 = detail::Clock::now();
    const auto degrees = decay_degrees();
    const auto study = semiclassical::convergence_study(MonomialSymbol{0, 1, -1, 0, 0, 0}, degrees,
                                                        semiclassical::KPolicy::zero, rs::Branch::P, opt.jobs);
    const double first = std::abs(study.rows.front().value);
    bool below = true;
    for (const auto& row : study.rows)
        if (row.N >= 1024)
            below = below && std::abs(row.value) < first;
    CriterionResult r{4, "Case-2 decay", false, false, detail::seconds_since(t0), {}};
    r.passed = study.slope <= -0.25 && below && r.seconds < 60.0;
    r.detail = "fitted slope " + detail::fmt(study.slope) + " (need <= -0.25), values at N >= 2^10 below N = 2^7: " +
               (below ? "yes" : "no") + ", runtime " + detail::fmt(r.seconds) + " s (budget 60 s)";
    return r;
}

// 5. Case-3 (momentum eta) decay with cancellation control.
inline CriterionResult case3_decay(const Options& opt = {})
{
    const auto t0 = detail::Clock::now();
    const auto degrees = decay_degrees();
    const auto study = semiclassical::convergence_study(MonomialSymbol{0, 0, 0, 1, 0, 0}, degrees,
                                                        semiclassical::KPolicy::zero, rs::Branch::P, opt.jobs);
    bool flagged = false;
    double max_abs = 0;
    for (const auto& row : study.rows) {
        flagged = flagged || row.precision_flag;
        max_abs = std::max(max_abs, std::abs(row.value));
    }
    CriterionResult r{5, "Case-3 decay", false, flagged, detail::seconds_since(t0), {}};
    const bool slope_ok = std::abs(study.slope + 1.0) <= 0.15;
    r.passed = slope_ok && !flagged && r.seconds < 60.0;
    r.detail = "fitted slope " + detail::fmt(study.slope) + " (need -1 +/- 0.15), precision flag " +
               (flagged ? "raised" : "clear") + ", max |value| " + detail::fmt(max_abs) + ", runtime " +
               detail::fmt(r.seconds) + " s (budget 60 s)";
    return r;
}

// 6. Rudin-Shapiro autocorrelation growth below n^0.74.
inline CriterionResult autocorrelation_exponent(const Options& = {})
{
    const auto t0 = detail::Clock::now();
    const auto lengths = rs::dyadic_range(6, 15);
    const auto fit = rs::autocorr_growth_exponent(lengths, rs::Branch::P);
    bool bounded = true;
    double worst = 0;
    for (const auto& p : fit.points) {
        const double bound = 8.0 * std::pow(static_cast<double>(p.length), 0.74);
        worst = std::max(worst, static_cast<double>(p.max_abs_corr) / bound);
        bounded = bounded && static_cast<double>(p.max_abs_corr) <= bound;
    }
    CriterionResult r{6, "autocorrelation exponent", false, false, detail::seconds_since(t0), {}};
    r.passed = bounded && fit.slope < 0.74 && r.seconds < 30.0;
    r.detail = "fitted exponent " + detail::fmt(fit.slope) + " (need < 0.74), max |A|/(8 n^0.74) = " +
               detail::fmt(worst) + ", runtime " + detail::fmt(r.seconds) + " s (budget 30 s)";
    return r;
}

// 7. Sup norms stay bounded, are k-invariant and do not grow with N.
inline CriterionResult uniform_boundedness(const Options& opt = {})
{
    const auto t0 = detail::Clock::now();
    struct Task {
        long N, k;
    };
    std::vector<Task> tasks;
    for (int m = 6; m <= 12; ++m) {
        const long N = (1L << m) - 1;
        for (long k : detail::probe_ks(N))
            tasks.push_back({N, k});
    }
    const auto sups = rsh::detail::parallel_map(tasks.size(), opt.jobs, [&](std::size_t i) {
        return harmonics::sup_norm({tasks[i].N, tasks[i].k, rs::Branch::P}).value;
    });

    double max_sup = 0, max_spread = 0;
    std::vector<double> lx, ly;
    for (std::size_t i = 0; i < tasks.size();) {
        const long N = tasks[i].N;
        double lo = sups[i], hi = sups[i];
        for (; i < tasks.size() && tasks[i].N == N; ++i) {
            lo = std::min(lo, sups[i]);
            hi = std::max(hi, sups[i]);
        }
        max_sup = std::max(max_sup, hi);
        max_spread = std::max(max_spread, (hi - lo) / hi);
        lx.push_back(std::log(static_cast<double>(N)));
        ly.push_back(std::log(hi));
    }
    const auto fit = rsh::detail::least_squares(lx, ly);
    CriterionResult r{7, "uniform boundedness", false, false, detail::seconds_since(t0), {}};
    r.passed = max_sup <= 10.0 && max_spread <= 1e-6 && std::abs(fit.slope) <= 0.05 && r.seconds < 600.0;
    r.detail = "max sup " + detail::fmt(max_sup) + " (need <= 10), k-spread " + detail::fmt(max_spread) +
               " (need <= 1e-6), growth slope " + detail::fmt(fit.slope) + " (need in [-0.05, 0.05]), runtime " +
               detail::fmt(r.seconds) + " s (budget 600 s)";
    return r;
}

// 8. Orthonormality by the coefficient identity and by quadrature.
inline CriterionResult orthonormality(const Options& opt = {})
{
    const double tol = opt.tol.value_or(1e-12);
    const auto t0 = detail::Clock::now();
    double coeff = 0;
    for (long N = 0; N <= 512; ++N)
        coeff = std::max(coeff, harmonics::orthonormality_defect(N, rs::Branch::P));
    double quad = 0;
    for (long N = 0; N <= 8; ++N) {
        const QuadratureGrid grid{static_cast<std::size_t>(2 * N + 8), static_cast<std::size_t>(2 * N + 4)};
        quad = std::max(quad, oracle::orthonormality_defect_quadrature(N, rs::Branch::P, grid));
    }
    CriterionResult r{8, "orthonormality", false, false, detail::seconds_since(t0), {}};
    r.passed = coeff <= tol && quad <= 1e-8;
    r.detail = "coefficient-identity defect " + detail::fmt(coeff) + " for N <= 512 (tol " + detail::fmt(tol) +
               "), quadrature defect " + detail::fmt(quad) + " for N <= 8 (tol 1e-8)";
    return r;
}

// 9. |xi_rho| = 1 and the volume = torus-average-then-rho disintegration.
inline CriterionResult geometry(const Options& = {})
{
    const auto t0 = detail::Clock::now();
    double unit = 0;
    for (int i = 1; i < 1000; ++i) {
        const double rho = i * 1e-3;
        unit = std::max(unit, std::abs(hopf::cometric_norm_sq({rho, 0, 0}, hopf::xi_rho(rho)) - 1.0));
    }
    const QuadratureGrid grid{16, 8};
    const auto rho_rule = gauss_legendre(8, 0.0, 1.0);
    double fubini = 0;
    for (int g = 0; g <= 3; ++g)
        for (int b1 = -3; b1 <= 3; ++b1)
            for (int b2 = -3; b2 <= 3; ++b2) {
                auto f = [&](const hopf::HopfPoint& p) {
                    return std::pow(p.rho, g) * std::polar(1.0, b1 * p.theta1 + b2 * p.theta2);
                };
                const auto vol = hopf::volume_integral(f, grid);
                std::complex<double> iterated = 0;
                for (std::size_t i = 0; i < rho_rule.nodes.size(); ++i)
                    iterated += rho_rule.weights[i] *
                                hopf::torus_average(f, hopf::CliffordTorus(rho_rule.nodes[i]), grid.n_theta);
                fubini = std::max(fubini, std::abs(vol - iterated));
            }
    CriterionResult r{9, "geometry self-consistency", false, false, detail::seconds_since(t0), {}};
    r.passed = unit <= 1e-14 && fubini <= 1e-10;
    r.detail = "max ||xi_rho|^2 - 1| " + detail::fmt(unit) + " (tol 1e-14), Fubini deviation " +
               detail::fmt(fubini) + " (tol 1e-10)";
    return r;
}

inline CriterionResult run_criterion(int id, const Options& opt = {})
{
    switch (id) {
    case 1: return exact_case1(opt);
    case 2: return oracle_equivalence(opt);
    case 3: return pinned_value(opt);
    case 4: return case2_decay(opt);
    case 5: return case3_decay(opt);
    case 6: return autocorrelation_exponent(opt);
    case 7: return uniform_boundedness(opt);
    case 8: return orthonormality(opt);
    case 9: return geometry(opt);
    }
    throw std::invalid_argument("unknown acceptance criterion " + std::to_string(id));
}

inline std::vector<int> suite_criteria(const std::string& suite)
{
    if (suite == "exact")
        return {1, 8, 9};
    if (suite == "oracle")
        return {2, 3};
    if (suite == "decay")
        return {4, 5, 6};
    if (suite == "bounded")
        return {7};
    if (suite == "all")
        return {1, 2, 3, 4, 5, 6, 7, 8, 9};
    throw std::invalid_argument("unknown verification suite '" + suite + "'");
}

inline std::string format_line(const CriterionResult& r)
{
    std::string status = r.passed ? "PASS" : (r.precision_flag ? "FAIL (precision flag)" : "FAIL");
    return "[" + status + "] criterion " + std::to_string(r.id) + " - " + r.name + ": " + r.detail;
}

} // namespace rsh::verify
