#include "cogrowth/json_io.hpp"

#include <cstdio>

namespace cogrowth {

namespace {

ordered_json json_or_null(const std::optional<double>& v) {
    if (v) return *v;
    return nullptr;
}

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

} // namespace

ordered_json to_json(const ExponentResult& res) {
    return ordered_json{{"value", res.value},
                        {"method", to_string(res.method)},
                        {"residual", res.residual},
                        {"bracket", {res.bracket_lo, res.bracket_hi}},
                        {"flags", res.flags}};
}

ordered_json to_json(const SpectralEstimate& est) {
    ordered_json j{{"value", est.value},
                   {"method", to_string(est.method)},
                   {"errorBound", json_or_null(est.error_bound)}};
    if (est.cross_check) j["crossCheck"] = *est.cross_check;
    if (!est.depths.empty()) {
        j["depths"] = est.depths;
        j["depthValues"] = est.depth_values;
    }
    if (est.extrapolated) j["extrapolated"] = *est.extrapolated;
    if (est.raw_value) j["rawValue"] = *est.raw_value;
    if (est.ci_lo && est.ci_hi) j["ci"] = {*est.ci_lo, *est.ci_hi};
    if (est.samples) j["samples"] = est.samples;
    if (est.steps) j["steps"] = est.steps;
    if (!est.rng.empty()) {
        j["seed"] = est.seed;
        j["rng"] = est.rng;
    }
    if (!est.notes.empty()) j["notes"] = est.notes;
    return j;
}

ordered_json to_json(const CoreGraph& core) {
    ordered_json edges = ordered_json::array();
    for (std::size_t v = 0; v < core.vertex_count(); ++v)
        for (std::size_t i = 0; i < core.rank(); ++i) {
            Letter l = static_cast<Letter>(i + 1);
            std::size_t w = core.neighbor(v, l);
            if (w != CoreGraph::npos)
                edges.push_back({{"from", v},
                                 {"label", std::string(1, static_cast<char>('a' + i))},
                                 {"to", w}});
        }
    return ordered_json{{"rank", core.rank()},
                        {"base", core.base()},
                        {"vertexCount", core.vertex_count()},
                        {"edges", std::move(edges)}};
}

ordered_json to_json(const SubgroupSpec& spec) {
    ordered_json j{{"rank", spec.rank},
                   {"generators", spec.generators},
                   {"normalClosure", spec.normal_closure},
                   {"conjugacyDepth", spec.conjugacy_depth}};
    if (!spec.key.empty()) j["key"] = spec.key;
    return j;
}

ordered_json to_json(const CogrowthReport& report) {
    ordered_json j{{"key", report.key},
                   {"rank", report.rank},
                   {"r", report.r},
                   {"deltaFree", report.delta_free_value},
                   {"deltaSub", to_json(report.delta_sub)},
                   {"branch", to_string(report.branch)},
                   {"weights", report.weights},
                   {"formulaLambda", report.formula_lambda},
                   {"numericLambda", to_json(report.numeric_lambda)},
                   {"discrepancy", report.discrepancy},
                   {"coreSize", report.core_size}};
    if (report.index)
        j["index"] = *report.index;
    else
        j["index"] = nullptr;
    return j;
}

SubgroupSpec subgroup_from_json(const ordered_json& j, std::size_t default_rank) {
    if (!j.is_object()) throw std::invalid_argument("subgroup spec: expected a JSON object");
    SubgroupSpec spec;
    spec.rank = j.value("rank", default_rank);
    if (!j.contains("generators") || !j["generators"].is_array())
        throw std::invalid_argument("subgroup spec: 'generators' array is required");
    for (const auto& g : j["generators"]) {
        if (!g.is_string())
            throw std::invalid_argument("subgroup spec: generators must be strings");
        spec.generators.push_back(g.get<std::string>());
    }
    spec.normal_closure = j.value("normalClosure", false);
    spec.conjugacy_depth = j.value("conjugacyDepth", std::size_t{0});
    spec.key = j.value("key", std::string{});
    return spec;
}

std::string report_csv_header() {
    return "subgroup,delta,deltaG,branch,formulaLambda,numericLambda,discrepancy,depth";
}

std::string report_csv_row(const CogrowthReport& report) {
    std::string row = report.key;
    row += ',' + fmt(report.delta_free_value);
    row += ',' + fmt(report.delta_sub.value);
    row += ',';
    row += to_string(report.branch);
    row += ',' + fmt(report.formula_lambda);
    row += ',' + fmt(report.numeric_lambda.value);
    row += ',' + fmt(report.discrepancy);
    row += ',' + std::to_string(report.numeric_lambda.depths.empty()
                                    ? 0
                                    : report.numeric_lambda.depths.back());
    return row;
}

} // namespace cogrowth
