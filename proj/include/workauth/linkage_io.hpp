#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "workauth/linkage.hpp"

// JSON Lines files exchanged between `link`, `apply-decisions` and the
// review endpoints: stubs, candidates, decisions, clusters.
namespace workauth::linkage {

nlohmann::json to_json(const WorkStub& stub);
WorkStub stub_from_json(const nlohmann::json& j);

/// {candidate_id, left, right, score, features, band}; absent features omitted.
nlohmann::json to_json(const MatchCandidate& candidate);
MatchCandidate candidate_from_json(const nlohmann::json& j);

/// {candidate_id, verdict, editor, timestamp}
nlohmann::json to_json(const MatchDecision& decision);
MatchDecision decision_from_json(const nlohmann::json& j);

nlohmann::json to_json(const Cluster& cluster);
Cluster cluster_from_json(const nlohmann::json& j);

/// Reads one JSON object per non-blank line. Throws Error("JSONL_INVALID")
/// naming the file and line.
std::vector<nlohmann::json> read_jsonl(const std::filesystem::path& path);
std::string to_jsonl(const std::vector<nlohmann::json>& rows);

template <typename T, typename F>
std::vector<T> read_jsonl_as(const std::filesystem::path& path, F convert) {
  std::vector<T> out;
  for (const auto& row : read_jsonl(path)) out.push_back(convert(row));
  return out;
}

}  // namespace workauth::linkage
