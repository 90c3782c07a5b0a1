#pragma once

#include <json.hpp>

#include <filesystem>
#include <optional>
#include <span>
#include <string>

#include "gapinfo/counterexample.hpp"
#include "gapinfo/dist_core.hpp"
#include "gapinfo/info_metrics.hpp"
#include "gapinfo/search.hpp"

namespace gapinfo {

/// Axis order written into every distribution file; files declaring another order
/// are rejected.
inline constexpr const char* kDistributionOrder = "bob,alice,eve";

// Distribution file layout (JSON):
//   {"shape": {"bob": 2, "alice": 2, "eve": 4},
//    "order": "bob,alice,eve",
//    "probs": [p000, p001, ..., p113]}
// probs are flattened row-major with Bob outermost and Eve innermost.

nlohmann::json distribution_to_json(const TripartiteDistribution& dist);
/// Throws ParseError, WrongOrder or ValidationError.
TripartiteDistribution distribution_from_json(const nlohmann::json& doc);

TripartiteDistribution load_distribution(const std::filesystem::path& path);
/// Cells are written with 17 significant digits, so loading reproduces them bit for bit.
void save_distribution(const TripartiteDistribution& dist, const std::filesystem::path& path);

nlohmann::json report_to_json(const InfoReport& report);
InfoReport report_from_json(const nlohmann::json& doc);
nlohmann::json search_result_to_json(const SearchResult& result, const SearchConfig& cfg);

/// Header `epsilon,p_b,p_e,i_ab,i_ae,gap`, then one 12-significant-digit line per row.
void emit_sweep_csv(std::span<const SweepRow> rows, const std::filesystem::path& path);
std::string sweep_csv(std::span<const SweepRow> rows);

/// Standalone 800x500 SVG with i_ab and i_ae against epsilon, plus a vertical marker
/// where the gap first changes sign.
void render_sweep_svg(std::span<const SweepRow> rows, const std::filesystem::path& path);
std::string sweep_svg(std::span<const SweepRow> rows);

/// Epsilon where the gap first changes sign, linearly interpolated between the two
/// bracketing rows.
std::optional<double> first_sign_change(std::span<const SweepRow> rows);

/// Writes `text` to `path`, throwing IoError on failure.
void write_text_file(const std::filesystem::path& path, const std::string& text);

}  // namespace gapinfo
