#pragma once

#include <string>

#include "json.hpp"

#include "cogrowth/cogrowth.hpp"
#include "cogrowth/exponents.hpp"
#include "cogrowth/spectrum.hpp"
#include "cogrowth/subgroups.hpp"

namespace cogrowth {

using ordered_json = nlohmann::ordered_json;

ordered_json to_json(const ExponentResult& res);
ordered_json to_json(const SpectralEstimate& est);
ordered_json to_json(const CoreGraph& core);
ordered_json to_json(const SubgroupSpec& spec);
ordered_json to_json(const CogrowthReport& report);

// Accepts {"rank", "generators", "normalClosure", "conjugacyDepth", "key"};
// rank falls back to default_rank when absent.
SubgroupSpec subgroup_from_json(const ordered_json& j, std::size_t default_rank);

std::string report_csv_header();
std::string report_csv_row(const CogrowthReport& report);

} // namespace cogrowth
