#pragma once

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "stbclab/dmt.hpp"
#include "stbclab/nvd.hpp"
#include "stbclab/simulator.hpp"
#include "stbclab/stbc.hpp"

namespace stbclab {

inline constexpr const char* kToolName = "stbclab";
inline constexpr const char* kToolVersion = "0.1.0";

using json = nlohmann::json;

json to_json(const LinearStbc& code);
LinearStbc stbc_from_json(const json& j);

json to_json(const MinDetReport& r);
json to_json(const CriterionVerdict& v);
json to_json(const DmtCurve& c);
json to_json(const KktProblem& p, const KktSolution& s);
json to_json(const KktCrossCheck& c);
json to_json(const NearOutageExponent& e);
json to_json(const SimStats& s);
json to_json(const OutageResult& o);

// Deterministic decimal formatting shared by every CSV writer.
std::string format_double(double v);

// Header + one row per SNR point; identical runs produce identical bytes.
std::string pe_csv(const SimStats& s);
std::string outage_csv(const OutageResult& o);

std::vector<std::pair<double, double>> read_snr_pe_csv(const std::filesystem::path& path);

// Writes via a temporary file and rename so readers never see partial output.
void write_text_atomic(const std::filesystem::path& path, const std::string& text);

}  // namespace stbclab
