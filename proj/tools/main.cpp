// Command-line front end: delta, lambda0, fold, verify, walk, sweep.
//
// Exit codes: 0 success, 1 verification above tolerance, 2 usage or config
// error, 3 resource cap exceeded, 4 internal numerical fault.

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "cogrowth/cogrowth.hpp"
#include "cogrowth/errors.hpp"
#include "cogrowth/json_io.hpp"

using namespace cogrowth;

namespace {

std::size_t resource_cap() {
    if (const char* env = std::getenv("COGROWTH_MAX_VERTICES")) {
        char* end = nullptr;
        unsigned long long v = std::strtoull(env, &end, 10);
        if (end && *end == '\0' && v > 0) return static_cast<std::size_t>(v);
        throw std::invalid_argument("COGROWTH_MAX_VERTICES must be a positive integer");
    }
    return kDefaultBallCap;
}

double parse_fraction(const std::string& token) {
    auto slash = token.find('/');
    std::size_t used = 0;
    if (slash == std::string::npos) {
        double v = std::stod(token, &used);
        if (used != token.size()) throw std::invalid_argument("bad number '" + token + "'");
        return v;
    }
    double num = std::stod(token.substr(0, slash), &used);
    if (used != slash) throw std::invalid_argument("bad fraction '" + token + "'");
    double den = std::stod(token.substr(slash + 1), &used);
    if (used != token.size() - slash - 1 || den == 0.0)
        throw std::invalid_argument("bad fraction '" + token + "'");
    return num / den;
}

std::vector<double> parse_simplex(const std::string& spec, std::size_t rank, const char* name) {
    if (spec == "uniform") return std::vector<double>(rank, 0.5 / static_cast<double>(rank));
    std::vector<double> vals;
    std::stringstream ss(spec);
    std::string token;
    while (std::getline(ss, token, ',')) vals.push_back(parse_fraction(token));
    if (vals.size() != rank)
        throw std::invalid_argument(std::string(name) + ": expected " + std::to_string(rank) +
                                    " comma-separated entries");
    double sum = 0.0;
    for (double v : vals) {
        if (!(v > 0.0)) throw std::invalid_argument(std::string(name) + ": entries must be positive");
        sum += v;
    }
    if (std::abs(sum - 0.5) > 1e-9)
        std::cerr << "warning: " << name << " sums to " << sum << "; renormalizing to 1/2\n";
    for (double& v : vals) v *= 0.5 / sum;
    return vals;
}

std::vector<std::size_t> parse_depths(const std::string& spec) {
    std::vector<std::size_t> out;
    std::stringstream ss(spec);
    std::string token;
    while (std::getline(ss, token, ',')) {
        long v = std::stol(token);
        if (v < 0) throw std::invalid_argument("depths must be nonnegative");
        out.push_back(static_cast<std::size_t>(v));
    }
    if (out.empty()) throw std::invalid_argument("at least one depth is required");
    return out;
}

SubgroupSpec load_subgroup(const std::string& arg, std::size_t rank) {
    ordered_json j;
    if (!arg.empty() && arg.front() == '{') {
        j = ordered_json::parse(arg);
    } else {
        std::ifstream in(arg);
        if (!in) throw std::invalid_argument("cannot open subgroup file '" + arg + "'");
        j = ordered_json::parse(in);
    }
    return subgroup_from_json(j, rank);
}

void emit(const std::string& output, const std::string& text) {
    if (output.empty() || output == "-") {
        std::cout << text;
        if (text.empty() || text.back() != '\n') std::cout << '\n';
        return;
    }
    std::ofstream out(output);
    if (!out) throw std::invalid_argument("cannot open output file '" + output + "'");
    out << text;
    if (text.empty() || text.back() != '\n') out << '\n';
}

std::string csv_num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"weighted growth exponents and Laplacian spectra on quotients of the free group"};
    app.require_subcommand(1);

    std::size_t rank = 2;
    std::string r_spec = "uniform";
    std::string p_spec = "uniform";
    std::string subgroup_arg;
    std::string depths_spec = "10,20,30";
    std::string output;
    std::string format = "json";
    std::string suite;
    double tol = 1e-2;
    double s_param = -1.0;
    std::uint64_t steps = 24;
    std::uint64_t trials = 1'000'000;
    std::optional<std::uint64_t> seed_opt;
    std::size_t depth = 0;
    std::size_t points = 50;

    auto* cmd_delta = app.add_subcommand("delta", "growth exponent of F_n or a subgroup");
    cmd_delta->add_option("--rank", rank, "rank n of the free group");
    cmd_delta->add_option("--r", r_spec, "edge-length parameter: 'uniform' or comma list");
    cmd_delta->add_option("--subgroup", subgroup_arg, "subgroup spec (inline JSON or file)");
    cmd_delta->add_option("--output", output, "output path (default stdout)");

    auto* cmd_lambda0 = app.add_subcommand("lambda0", "bottom of the spectrum on the full tree");
    cmd_lambda0->add_option("--rank", rank);
    cmd_lambda0->add_option("--p", p_spec, "'uniform', comma list, or 'p-star'");
    cmd_lambda0->add_option("--r", r_spec, "edge lengths (used with --p p-star)");
    cmd_lambda0->add_option("--s", s_param, "exponent for p-star");
    cmd_lambda0->add_option("--output", output);

    auto* cmd_fold = app.add_subcommand("fold", "core graph of a subgroup");
    cmd_fold->add_option("--rank", rank);
    cmd_fold->add_option("--subgroup", subgroup_arg)->required();
    cmd_fold->add_option("--output", output);

    auto* cmd_verify = app.add_subcommand("verify", "compare formula and truncated spectrum");
    cmd_verify->add_option("--rank", rank);
    cmd_verify->add_option("--r", r_spec);
    cmd_verify->add_option("--suite", suite, "'builtin' for the five-subgroup suite");
    cmd_verify->add_option("--subgroup", subgroup_arg);
    cmd_verify->add_option("--depths", depths_spec, "comma list of truncation depths");
    cmd_verify->add_option("--tol", tol, "discrepancy tolerance deciding the exit code");
    cmd_verify->add_option("--format", format, "json or csv");
    cmd_verify->add_option("--output", output);

    auto* cmd_walk = app.add_subcommand("walk", "Monte Carlo return-rate estimate");
    cmd_walk->add_option("--rank", rank);
    cmd_walk->add_option("--p", p_spec);
    cmd_walk->add_option("--subgroup", subgroup_arg, "defaults to the trivial subgroup");
    cmd_walk->add_option("--steps", steps, "even number of steps 2m");
    cmd_walk->add_option("--trials", trials);
    cmd_walk->add_option("--seed", seed_opt, "RNG seed (synthesized and printed if absent)");
    cmd_walk->add_option("--depth", depth, "truncation depth (default steps/2 + 1)");
    cmd_walk->add_option("--output", output);

    auto* cmd_sweep = app.add_subcommand("sweep", "CSV sweep of the cogrowth formula");
    cmd_sweep->add_option("--rank", rank);
    cmd_sweep->add_option("--r", r_spec);
    cmd_sweep->add_option("--points", points, "grid size");
    cmd_sweep->add_option("--output", output);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        const std::size_t cap = resource_cap();

        if (cmd_delta->parsed()) {
            EdgeLengths r(parse_simplex(r_spec, rank, "--r"));
            ordered_json out{{"rank", rank}, {"r", r.values()}};
            ExponentResult res;
            if (!subgroup_arg.empty()) {
                SubgroupSpec spec = load_subgroup(subgroup_arg, rank);
                res = delta_subgroup(spec.build(cap), r);
                out["subgroup"] = to_json(spec);
            } else {
                res = delta_free(r);
            }
            out["delta"] = res.value;
            out["result"] = to_json(res);
            emit(output, out.dump(2));
            return 0;
        }

        if (cmd_lambda0->parsed()) {
            Weights pw = [&] {
                if (p_spec == "p-star") {
                    if (s_param < 0.0)
                        throw std::invalid_argument("--s is required with --p p-star");
                    EdgeLengths r(parse_simplex(r_spec, rank, "--r"));
                    return p_star(r, s_param);
                }
                return Weights(parse_simplex(p_spec, rank, "--p"));
            }();
            double rho1 = rho_eq1(pw);
            double rho2 = rho_gamma(pw);
            ordered_json out{{"rank", rank},
                             {"p", pw.values()},
                             {"lambda0", 1.0 - rho1},
                             {"rho", rho1},
                             {"methods",
                              {{"closed-form-min", 1.0 - rho1}, {"gamma-max", 1.0 - rho2}}},
                             {"agreement", std::abs(rho1 - rho2)},
                             {"tauStar", tau_star(pw)}};
            if (p_spec == "p-star") out["s"] = s_param;
            if (pw.is_uniform(1e-12)) {
                out["kestenBottom"] = kesten_bottom(rank);
                out["displayedBottom"] = displayed_bottom(rank);
            }
            emit(output, out.dump(2));
            return 0;
        }

        if (cmd_fold->parsed()) {
            SubgroupSpec spec = load_subgroup(subgroup_arg, rank);
            CoreGraph core = spec.build(cap);
            auto idx = subgroup_index(core);
            ordered_json out{{"spec", to_json(spec)},
                             {"core", to_json(core)},
                             {"index", idx ? ordered_json(*idx) : ordered_json(nullptr)},
                             {"missingHalfEdges", core.missing_half_edges()}};
            emit(output, out.dump(2));
            return 0;
        }

        if (cmd_verify->parsed()) {
            EdgeLengths r(parse_simplex(r_spec, rank, "--r"));
            VerifyConfig config;
            config.depths = parse_depths(depths_spec);
            config.vertex_cap = cap;

            std::vector<SubgroupSpec> specs;
            if (suite == "builtin") {
                specs = builtin_suite();
            } else if (!suite.empty()) {
                throw std::invalid_argument("unknown suite '" + suite + "'");
            }
            if (!subgroup_arg.empty()) specs.push_back(load_subgroup(subgroup_arg, rank));
            if (specs.empty())
                throw std::invalid_argument("verify requires --suite builtin or --subgroup");
            for (std::size_t i = 0; i < specs.size(); ++i)
                if (specs[i].key.empty()) specs[i].key = "subgroup-" + std::to_string(i);
            std::sort(specs.begin(), specs.end(),
                      [](const SubgroupSpec& a, const SubgroupSpec& b) { return a.key < b.key; });

            std::vector<CogrowthReport> reports;
            reports.reserve(specs.size());
            bool ok = true;
            for (const auto& spec : specs) {
                reports.push_back(verify_subgroup(spec, r, config));
                ok = ok && reports.back().discrepancy <= tol;
            }

            if (format == "csv") {
                std::string text = report_csv_header();
                for (const auto& rep : reports) text += '\n' + report_csv_row(rep);
                emit(output, text);
            } else if (format == "json") {
                ordered_json arr = ordered_json::array();
                for (const auto& rep : reports) arr.push_back(to_json(rep));
                emit(output, arr.dump(2));
            } else {
                throw std::invalid_argument("unknown format '" + format + "'");
            }
            return ok ? 0 : 1;
        }

        if (cmd_walk->parsed()) {
            Weights pw(parse_simplex(p_spec, rank, "--p"));
            SubgroupSpec spec;
            spec.rank = rank;
            if (!subgroup_arg.empty()) spec = load_subgroup(subgroup_arg, rank);
            CoreGraph core = spec.build(cap);
            if (depth == 0) depth = steps / 2 + 1;
            std::uint64_t seed = seed_opt ? *seed_opt : [] {
                std::random_device rd;
                return (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
            }();
            TruncatedQuotient tq = truncate_quotient(core, depth, cap);
            SpectralEstimate est = mc_return_rate(tq, pw, steps, trials, seed);
            ordered_json out{{"rank", rank},
                             {"p", pw.values()},
                             {"subgroup", to_json(spec)},
                             {"depth", depth},
                             {"estimate", to_json(est)}};
            emit(output, out.dump(2));
            return 0;
        }

        if (cmd_sweep->parsed()) {
            EdgeLengths r(parse_simplex(r_spec, rank, "--r"));
            double delta = delta_free(r).value;
            bool uniform = r_spec == "uniform";
            std::string text;
            if (uniform) {
                double top = std::log(2.0 * static_cast<double>(rank) - 1.0);
                double log2n = std::log(2.0 * static_cast<double>(rank));
                text = "deltaUnit,deltaSub,lambdaFormula,lambdaClassic,absDiff";
                for (std::size_t i = 0; i < points; ++i) {
                    double du = top * static_cast<double>(i) / static_cast<double>(points - 1);
                    double ds = du / log2n;
                    double lf = cogrowth_lambda(r, ds, delta);
                    double lc = grigorchuk_classic(rank, du);
                    text += '\n' + csv_num(du) + ',' + csv_num(ds) + ',' + csv_num(lf) + ',' +
                            csv_num(lc) + ',' + csv_num(std::abs(lf - lc));
                }
            } else {
                text = "deltaSub,lambdaFormula";
                for (std::size_t i = 0; i < points; ++i) {
                    double ds = delta * static_cast<double>(i) / static_cast<double>(points - 1);
                    text += '\n' + csv_num(ds) + ',' + csv_num(cogrowth_lambda(r, ds, delta));
                }
            }
            emit(output, text);
            return 0;
        }
    } catch (const ResourceCapExceeded& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 3;
    } catch (const ConsistencyError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 4;
    } catch (const nlohmann::json::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 2;
}
