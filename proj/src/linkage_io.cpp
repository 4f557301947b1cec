#include "workauth/linkage_io.hpp"

#include <fstream>
#include <sstream>

#include "workauth/error.hpp"

namespace workauth::linkage {

using nlohmann::json;

namespace {

json lang_text(const LangText& t) { return {{"lang", t.lang}, {"text", t.text}}; }

LangText lang_text_from(const json& j) { return {j.value("lang", ""), j.at("text").get<std::string>()}; }

template <typename T>
std::optional<T> opt(const json& j, const char* key) {
  if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
  return j.at(key).get<T>();
}

}  // namespace

json to_json(const WorkStub& stub) {
  json j;
  j["stub_id"] = stub.stub_id;
  j["titles"] = json::array();
  for (const auto& t : stub.titles) j["titles"].push_back(lang_text(t));
  if (stub.author_uri) j["author_uri"] = stub.author_uri->render();
  if (stub.author_name) j["author_name"] = *stub.author_name;
  if (stub.incipit) j["incipit"] = lang_text(*stub.incipit);
  if (stub.source_ms) {
    const auto& l = stub.source_ms->locus;
    j["source_ms"] = {{"manuscript", stub.source_ms->manuscript.render()},
                      {"locus", {{"from", l.from}, {"to", l.to}, {"display", l.display}}}};
  }
  j["provenance"] = stub.provenance;
  return j;
}

WorkStub stub_from_json(const json& j) {
  WorkStub s;
  s.stub_id = j.at("stub_id").get<std::string>();
  for (const auto& t : j.value("titles", json::array())) s.titles.push_back(lang_text_from(t));
  if (auto uri = opt<std::string>(j, "author_uri")) s.author_uri = EntityUri::parse(*uri);
  s.author_name = opt<std::string>(j, "author_name");
  if (j.contains("incipit")) s.incipit = lang_text_from(j.at("incipit"));
  if (j.contains("source_ms")) {
    const auto& ms = j.at("source_ms");
    const auto& l = ms.at("locus");
    s.source_ms = ManuscriptSource{EntityUri::parse(ms.at("manuscript").get<std::string>()),
                                   Locus{l.value("from", ""), l.value("to", ""), l.value("display", ""), std::nullopt}};
  }
  s.provenance = j.value("provenance", "");
  return s;
}

json to_json(const MatchCandidate& c) {
  json features = json::object();
  if (c.features.title_sim) features["title_sim"] = *c.features.title_sim;
  if (c.features.author_match) features["author_match"] = *c.features.author_match;
  if (c.features.incipit_sim) features["incipit_sim"] = *c.features.incipit_sim;
  return {{"candidate_id", c.candidate_id}, {"left", c.left},
          {"right", c.right},               {"score", c.score},
          {"features", features},           {"band", std::string(to_string(c.band))}};
}

MatchCandidate candidate_from_json(const json& j) {
  MatchCandidate c;
  c.left = j.at("left").get<std::string>();
  c.right = j.at("right").get<std::string>();
  c.candidate_id = j.value("candidate_id", candidate_id_for(c.left, c.right));
  c.score = j.value("score", 0.0);
  if (j.contains("features")) {
    const auto& f = j.at("features");
    c.features.title_sim = opt<double>(f, "title_sim");
    c.features.author_match = opt<double>(f, "author_match");
    c.features.incipit_sim = opt<double>(f, "incipit_sim");
  }
  c.band = band_from_string(j.value("band", "reject"));
  return c;
}

json to_json(const MatchDecision& d) {
  return {{"candidate_id", d.candidate_id},
          {"verdict", std::string(to_string(d.verdict))},
          {"editor", d.editor},
          {"timestamp", d.timestamp}};
}

MatchDecision decision_from_json(const json& j) {
  MatchDecision d;
  d.candidate_id = j.at("candidate_id").get<std::string>();
  d.verdict = verdict_from_string(j.at("verdict").get<std::string>());
  d.editor = j.at("editor").get<std::string>();
  d.timestamp = j.value("timestamp", "");
  return d;
}

json to_json(const Cluster& c) { return {{"cluster_id", c.cluster_id}, {"members", c.members}}; }

Cluster cluster_from_json(const json& j) {
  return {j.at("cluster_id").get<std::string>(), j.at("members").get<std::vector<std::string>>()};
}

std::vector<json> read_jsonl(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("IO_ERROR", "cannot read " + path.string());
  std::vector<json> rows;
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      auto row = json::parse(line);
      if (!row.is_object()) throw Error("JSONL_INVALID", "not an object");
      rows.push_back(std::move(row));
    } catch (const std::exception& e) {
      throw Error("JSONL_INVALID", path.string() + ":" + std::to_string(number) + ": " + e.what());
    }
  }
  return rows;
}

std::string to_jsonl(const std::vector<json>& rows) {
  std::string out;
  for (const auto& row : rows) out += row.dump() + "\n";
  return out;
}

}  // namespace workauth::linkage
