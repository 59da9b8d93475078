// Command-line front end: sequence generation, sup-norm scans,
// matrix-element evaluation, convergence fits and the verification suites.
//
// Exit status: 0 success, 1 verification failure, 2 verification precision
// flag, 64 usage error, 65 numeric domain error.

#include "rsh/harmonics.hpp"
#include "rsh/oracle_quadrature.hpp"
#include "rsh/rudin_shapiro.hpp"
#include "rsh/semiclassical.hpp"
#include "rsh/verification.hpp"

#include <CLI11.hpp>
#include <json.hpp>
#include <openssl/evp.h>

#include <chrono>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

namespace {

using nlohmann::json;
using rsh::semiclassical::MonomialSymbol;

constexpr int kExitUsage = 64;
constexpr int kExitDomain = 65;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string g17(double x)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

// "g=0,b1=1,b2=-1,a=0,x1=0,x2=0"; omitted exponents default to 0.
MonomialSymbol parse_symbol(const std::string& text)
{
    static const std::map<std::string, int MonomialSymbol::*> fields{
        {"g", &MonomialSymbol::gamma}, {"b1", &MonomialSymbol::beta1}, {"b2", &MonomialSymbol::beta2},
        {"a", &MonomialSymbol::a},     {"x1", &MonomialSymbol::b1},    {"x2", &MonomialSymbol::b2}};
    MonomialSymbol s;
    std::stringstream in(text);
    std::string item;
    while (std::getline(in, item, ',')) {
        const auto eq = item.find('=');
        if (eq == std::string::npos)
            throw UsageError("symbol entry '" + item + "' is not key=value");
        const auto key = item.substr(0, eq);
        const auto it = fields.find(key);
        if (it == fields.end())
            throw UsageError("unknown symbol exponent '" + key + "' (expected g, b1, b2, a, x1, x2)");
        try {
            std::size_t used = 0;
            s.*(it->second) = std::stoi(item.substr(eq + 1), &used);
            if (used != item.size() - eq - 1)
                throw std::invalid_argument(item);
        } catch (const std::logic_error&) {
            throw UsageError("symbol exponent '" + key + "' is not an integer");
        }
    }
    return s;
}

json symbol_json(const MonomialSymbol& s)
{
    return {{"g", s.gamma}, {"b1", s.beta1}, {"b2", s.beta2}, {"a", s.a}, {"x1", s.b1}, {"x2", s.b2}};
}

json complex_json(std::complex<double> z) { return {{"re", z.real()}, {"im", z.imag()}}; }

json report_json(const rsh::semiclassical::MatrixElementReport& r)
{
    return {{"value", complex_json(r.value)},
            {"case", rsh::semiclassical::to_string(r.case_tag)},
            {"N", r.N},
            {"k", r.k},
            {"max_term_magnitude", r.max_term_magnitude},
            {"cancellation_ratio", r.cancellation_ratio},
            {"method", rsh::semiclassical::to_string(r.method)},
            {"precision_flag", r.precision_flag},
            {"skipped_terms", r.skipped_terms}};
}

std::string sha256_hex(const std::string& bytes)
{
    unsigned char md[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    EVP_Digest(bytes.data(), bytes.size(), md, &len, EVP_sha256(), nullptr);
    std::string hex;
    char buf[3];
    for (unsigned int i = 0; i < len; ++i) {
        std::snprintf(buf, sizeof buf, "%02x", md[i]);
        hex += buf;
    }
    return hex;
}

std::string utc_timestamp()
{
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

// Collects data files written by one invocation; each gets a sibling
// <file>.manifest.json listing every output with its digest. Timestamps
// live only in manifests so data files stay byte-identical across runs.
class RunRecorder {
public:
    RunRecorder(int argc, char** argv)
    {
        for (int i = 0; i < argc; ++i)
            command_line_.push_back(argv[i]);
    }

    json parameters = json::object();
    std::string branch = "P";

    // Writes to `path`, or to stdout when the path is empty.
    void emit(const std::string& path, const std::string& content)
    {
        if (path.empty()) {
            std::cout << content;
            return;
        }
        std::ofstream out(path, std::ios::binary);
        if (!out)
            throw std::runtime_error("cannot open '" + path + "' for writing");
        out << content;
        outputs_.push_back({{"path", path}, {"sha256", sha256_hex(content)}, {"bytes", content.size()}});
    }

    void finish() const
    {
        if (outputs_.empty())
            return;
        const json manifest{{"tool", "rsh"},
                            {"tool_version", RSH_VERSION},
                            {"command_line", command_line_},
                            {"parameters", parameters},
                            {"branch", branch},
                            {"timestamp", utc_timestamp()},
                            {"outputs", outputs_}};
        for (const auto& o : outputs_) {
            std::ofstream out(o["path"].get<std::string>() + ".manifest.json", std::ios::binary);
            out << manifest.dump(2) << '\n';
        }
    }

private:
    std::vector<std::string> command_line_;
    json outputs_ = json::array();
};

std::vector<long> dyadic_between(long lo, long hi)
{
    if (lo < 1 || hi < lo)
        throw std::invalid_argument("need 1 <= nmin <= nmax");
    std::vector<long> out;
    for (long n = 1; n <= hi; n *= 2)
        if (n >= lo)
            out.push_back(n);
    return out;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Rudin-Shapiro spherical harmonics on S^3: construction and semiclassical diagnostics"};
    app.require_subcommand(1);
    app.set_version_flag("--version", RSH_VERSION);

    RunRecorder rec(argc, argv);
    std::string branch_name = "P";
    unsigned jobs = rsh::detail::default_jobs();
    int exit_code = 0;

    auto add_branch = [&](CLI::App* cmd) {
        cmd->add_option("--branch", branch_name, "Rudin-Shapiro branch")->check(CLI::IsMember({"P", "Q"}));
    };
    auto add_jobs = [&](CLI::App* cmd) {
        cmd->add_option("--jobs", jobs, "Worker threads for independent tasks")->check(CLI::PositiveNumber);
    };

    // rs gen / rs autocorr
    auto* rs_cmd = app.add_subcommand("rs", "Rudin-Shapiro sequences");
    rs_cmd->require_subcommand(1);
    std::size_t gen_n = 0;
    std::string gen_out;
    auto* gen = rs_cmd->add_subcommand("gen", "Print the first n signs as a JSON array");
    gen->add_option("--n", gen_n, "Sequence length")->required();
    gen->add_option("--out", gen_out, "Write to a file instead of stdout");
    add_branch(gen);

    std::size_t ac_nmax = 0, ac_nmin = 64;
    bool ac_dyadic = false;
    std::string ac_csv;
    auto* autocorr = rs_cmd->add_subcommand("autocorr", "Autocorrelation growth: CSV of n, max |A|, fitted slope");
    autocorr->add_option("--nmax", ac_nmax, "Largest length")->required();
    autocorr->add_option("--nmin", ac_nmin, "Smallest length")->capture_default_str();
    autocorr->add_flag("--dyadic", ac_dyadic, "Use powers of two between nmin and nmax");
    autocorr->add_option("--csv", ac_csv, "CSV output path (stdout if omitted)");
    add_branch(autocorr);

    // harmonic supnorm
    auto* harmonic = app.add_subcommand("harmonic", "Basis functions P_{N,k}");
    harmonic->require_subcommand(1);
    long sup_N = -1;
    std::optional<long> sup_k;
    std::string sup_csv;
    auto* supnorm = harmonic->add_subcommand("supnorm", "Sup norm of P_{N,k} (k = 0, N/2, N if --k is omitted)");
    supnorm->add_option("--N", sup_N, "Degree")->required();
    supnorm->add_option("--k", sup_k, "Basis index");
    supnorm->add_option("--csv", sup_csv, "CSV output path (stdout if omitted)");
    add_branch(supnorm);
    add_jobs(supnorm);

    // matelem
    long me_N = 0, me_k = 0;
    std::string me_symbol, me_out;
    bool me_oracle = false;
    auto* matelem = app.add_subcommand("matelem", "Matrix element <Op_N(f) P_{N,k}, P_{N,k}> as JSON");
    matelem->add_option("--N", me_N, "Degree")->required();
    matelem->add_option("--k", me_k, "Basis index")->required();
    matelem->add_option("--symbol", me_symbol, "g=,b1=,b2=,a=,x1=,x2=")->required();
    matelem->add_flag("--oracle", me_oracle, "Use the quadrature oracle instead of the closed sum");
    matelem->add_option("--out", me_out, "Write to a file instead of stdout");
    add_branch(matelem);

    // limit
    std::string lim_symbol, lim_out;
    auto* limit = app.add_subcommand("limit", "Clifford-torus limit of a monomial symbol as JSON");
    limit->add_option("--symbol", lim_symbol, "g=,b1=,b2=,a=,x1=,x2=")->required();
    limit->add_option("--out", lim_out, "Write to a file instead of stdout");

    // converge
    std::string cv_symbol, cv_csv, cv_json, cv_policy = "zero";
    long cv_nmin = 0, cv_nmax = 0;
    auto* converge = app.add_subcommand("converge", "Deviation from the limit over dyadic N, with log-log fit");
    converge->add_option("--symbol", cv_symbol, "g=,b1=,b2=,a=,x1=,x2=")->required();
    converge->add_option("--nmin", cv_nmin, "Smallest degree")->required();
    converge->add_option("--nmax", cv_nmax, "Largest degree")->required();
    converge->add_option("--k-policy", cv_policy, "Basis index per degree")
        ->check(CLI::IsMember({"zero", "half", "last"}))
        ->capture_default_str();
    converge->add_option("--csv", cv_csv, "CSV output path (stdout if omitted)");
    converge->add_option("--json", cv_json, "Fit JSON output path (stdout if omitted)");
    add_branch(converge);
    add_jobs(converge);

    // verify
    std::string vf_suite;
    std::optional<double> vf_tol;
    auto* verify = app.add_subcommand("verify", "Run an acceptance suite");
    verify->add_option("--suite", vf_suite, "Suite to run")
        ->required()
        ->check(CLI::IsMember({"exact", "oracle", "decay", "bounded", "all"}));
    verify->add_option("--tol", vf_tol, "Override the suite's exactness tolerance");
    add_jobs(verify);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        const auto branch = rsh::rs::parse_branch(branch_name);
        rec.branch = branch_name;

        if (*gen) {
            rec.parameters = {{"n", gen_n}};
            const auto seq = rsh::rs::generate(gen_n, branch);
            json arr = json::array();
            for (auto v : seq.values())
                arr.push_back(static_cast<int>(v));
            rec.emit(gen_out, arr.dump() + "\n");
        } else if (*autocorr) {
            rec.parameters = {{"nmin", ac_nmin}, {"nmax", ac_nmax}, {"dyadic", ac_dyadic}};
            std::vector<std::size_t> lengths;
            if (ac_dyadic) {
                for (long n : dyadic_between(static_cast<long>(ac_nmin), static_cast<long>(ac_nmax)))
                    lengths.push_back(static_cast<std::size_t>(n));
            } else {
                for (std::size_t n = ac_nmin; n <= ac_nmax; ++n)
                    lengths.push_back(n);
            }
            const auto fit = rsh::rs::autocorr_growth_exponent(lengths, branch);
            std::string csv = "n,beta_max_abs_corr,fitted_slope\n";
            for (const auto& p : fit.points)
                csv += std::to_string(p.length) + "," + std::to_string(p.max_abs_corr) + "," + g17(fit.slope) + "\n";
            rec.emit(ac_csv, csv);
        } else if (*supnorm) {
            rec.parameters = {{"N", sup_N}};
            std::vector<long> ks;
            if (sup_k) {
                ks.push_back(*sup_k);
                rec.parameters["k"] = *sup_k;
            } else {
                ks = rsh::verify::detail::probe_ks(sup_N);
            }
            for (long k : ks)
                rsh::harmonics::HarmonicSpec{sup_N, k, branch}.validate();
            const auto res = rsh::detail::parallel_map(ks.size(), jobs, [&](std::size_t i) {
                return rsh::harmonics::sup_norm({sup_N, ks[i], branch});
            });
            std::string csv = "N,k,sup,rho_argmax,phi_argmax\n";
            for (std::size_t i = 0; i < ks.size(); ++i) {
                const double phi = rsh::hopf::reduce_angle(res[i].argmax.theta1 - res[i].argmax.theta2);
                csv += std::to_string(sup_N) + "," + std::to_string(ks[i]) + "," + g17(res[i].value) + "," +
                       g17(res[i].argmax.rho) + "," + g17(phi) + "\n";
            }
            rec.emit(sup_csv, csv);
        } else if (*matelem) {
            const auto s = parse_symbol(me_symbol);
            rec.parameters = {{"N", me_N}, {"k", me_k}, {"symbol", symbol_json(s)}, {"oracle", me_oracle}};
            const auto rep = me_oracle ? rsh::oracle::matrix_element_quadrature(me_N, me_k, s, branch)
                                       : rsh::semiclassical::matrix_element(me_N, me_k, s, branch);
            rec.emit(me_out, report_json(rep).dump(2) + "\n");
        } else if (*limit) {
            const auto s = parse_symbol(lim_symbol);
            rec.parameters = {{"symbol", symbol_json(s)}};
            rec.emit(lim_out, complex_json(rsh::semiclassical::clifford_limit(s)).dump(2) + "\n");
        } else if (*converge) {
            const auto s = parse_symbol(cv_symbol);
            rec.parameters = {{"symbol", symbol_json(s)}, {"nmin", cv_nmin}, {"nmax", cv_nmax}, {"k_policy", cv_policy}};
            const auto policy = cv_policy == "half"   ? rsh::semiclassical::KPolicy::half
                                : cv_policy == "last" ? rsh::semiclassical::KPolicy::last
                                                      : rsh::semiclassical::KPolicy::zero;
            const auto degrees = dyadic_between(cv_nmin, cv_nmax);
            const auto study = rsh::semiclassical::convergence_study(s, degrees, policy, branch, jobs);
            std::string csv = "N,re,im,abs_deviation\n";
            for (const auto& r : study.rows)
                csv += std::to_string(r.N) + "," + g17(r.value.real()) + "," + g17(r.value.imag()) + "," +
                       g17(r.deviation) + "\n";
            auto nan_to_null = [](double x) { return std::isfinite(x) ? json(x) : json(nullptr); };
            bool flagged = false;
            for (const auto& r : study.rows)
                flagged = flagged || r.precision_flag;
            const json fit{{"symbol", symbol_json(s)},
                           {"limit", complex_json(study.limit)},
                           {"slope", nan_to_null(study.slope)},
                           {"intercept", nan_to_null(study.intercept)},
                           {"fitted_points", study.fitted_points},
                           {"exact", study.exact},
                           {"precision_flag", flagged}};
            rec.emit(cv_csv, csv);
            rec.emit(cv_json, fit.dump(2) + "\n");
        } else if (*verify) {
            rsh::verify::Options opt;
            opt.tol = vf_tol;
            opt.jobs = jobs;
            bool failed = false, flagged = false;
            for (int id : rsh::verify::suite_criteria(vf_suite)) {
                const auto r = rsh::verify::run_criterion(id, opt);
                std::cout << rsh::verify::format_line(r) << std::endl;
                failed = failed || !r.passed;
                flagged = flagged || r.precision_flag;
            }
            exit_code = flagged ? 2 : (failed ? 1 : 0);
        }
        rec.finish();
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::invalid_argument& e) {
        std::cerr << "domain error: " << e.what() << '\n';
        return kExitDomain;
    } catch (const std::domain_error& e) {
        std::cerr << "domain error: " << e.what() << '\n';
        return kExitDomain;
    } catch (const rsh::PrecisionError& e) {
        std::cerr << "precision error: " << e.what() << '\n';
        return kExitDomain;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return exit_code;
}
