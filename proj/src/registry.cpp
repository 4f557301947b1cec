#include "workauth/registry.hpp"

#include <unistd.h>

#include <algorithm>
#include <atomic>
#include <fstream>
#include <mutex>
#include <sstream>

#include <json.hpp>

#include "workauth/error.hpp"
#include "workauth/tei.hpp"
#include "workauth/text.hpp"

namespace fs = std::filesystem;

namespace workauth {

namespace {

constexpr EntityKind kAllKinds[] = {EntityKind::work, EntityKind::manuscript, EntityKind::bibl, EntityKind::person,
                                    EntityKind::place};

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("IO_ERROR", "cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::string> search_tokens(std::string_view text) {
  auto tokens = normalize_title(text);
  std::erase_if(tokens, [](const std::string& t) { return codepoint_length(t) < 2; });
  std::sort(tokens.begin(), tokens.end());
  tokens.erase(std::unique(tokens.begin(), tokens.end()), tokens.end());
  return tokens;
}

std::string relative_file(const EntityUri& uri) { return "works/" + std::to_string(uri.id) + ".xml"; }

/// Reads every works/*.xml file, checking the filename against the URI.
std::map<EntityUri, WorkRecord> read_records(const fs::path& root) {
  std::map<EntityUri, WorkRecord> out;
  auto dir = root / "works";
  if (!fs::is_directory(dir)) return out;
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir))
    if (entry.is_regular_file() && entry.path().extension() == ".xml") files.push_back(entry.path());
  std::sort(files.begin(), files.end());
  for (const auto& file : files) {
    WorkRecord record;
    try {
      record = parse_work_record(read_file(file));
    } catch (const Error& e) {
      throw Error("REGISTRY_INVALID", file.string() + ": " + e.what());
    }
    if (file.filename().string() != std::to_string(record.uri.id) + ".xml")
      throw Error("REGISTRY_INVALID", file.string() + ": file name does not match " + record.uri.render());
    out.emplace(record.uri, std::move(record));
  }
  return out;
}

}  // namespace

void write_file_atomic(const fs::path& target, std::string_view contents) {
  static std::atomic<unsigned> counter{0};
  auto tmp = target;
  tmp += ".tmp-" + std::to_string(::getpid()) + "-" + std::to_string(counter++);
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("IO_ERROR", "cannot write " + tmp.string());
    out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    out.flush();
    if (!out) {
      std::error_code ec;
      fs::remove(tmp, ec);
      throw Error("IO_ERROR", "short write to " + tmp.string());
    }
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw Error("IO_ERROR", "cannot replace " + target.string());
  }
}

std::string display_headword(const WorkRecord& record) {
  if (auto en = canonical_headword(record, "en")) return en->text.str();
  for (const auto& t : record.titles)
    if (t.is_headword()) return t.text.str();
  return record.titles.empty() ? std::string() : record.titles.front().text.str();
}

Registry::Registry(fs::path root, Mode mode) : root_(std::move(root)), mode_(mode) {
  if (mode_ == Mode::read_write) fs::create_directories(root_ / "works");
  else if (!fs::is_directory(root_)) throw Error("REGISTRY_INVALID", root_.string() + " is not a directory");
  load();
}

void Registry::load() {
  records_ = read_records(root_);
  index_ = {};
  for (const auto& [uri, record] : records_) index_record(index_, record, relative_file(uri));
  for (auto kind : kAllKinds) next_ids_[kind] = 1;
  auto state = root_ / "mint.json";
  if (fs::exists(state)) {
    try {
      auto j = nlohmann::json::parse(read_file(state));
      for (auto kind : kAllKinds) {
        auto key = std::string(to_string(kind));
        if (j.contains(key)) next_ids_[kind] = std::max<std::uint64_t>(1, j.at(key).get<std::uint64_t>());
      }
    } catch (const nlohmann::json::exception& e) {
      throw Error("REGISTRY_INVALID", state.string() + ": " + e.what());
    }
  }
  if (!records_.empty()) {
    auto top = records_.rbegin()->first.id;
    next_ids_[EntityKind::work] = std::max(next_ids_[EntityKind::work], top + 1);
  }
}

void Registry::persist_mint_state() {
  nlohmann::json j = nlohmann::json::object();
  for (const auto& [kind, next] : next_ids_) j[std::string(to_string(kind))] = next;
  write_file_atomic(root_ / "mint.json", j.dump(2) + "\n");
}

EntityUri Registry::mint(EntityKind kind) {
  std::unique_lock lock(mutex_);
  if (mode_ != Mode::read_write) throw Error("READ_ONLY", "registry is read-only");
  auto id = next_ids_[kind]++;
  persist_mint_state();
  return EntityUri{kind, id, std::nullopt};
}

std::uint64_t Registry::next_id(EntityKind kind) const {
  std::shared_lock lock(mutex_);
  return next_ids_.at(kind);
}

void Registry::put(const WorkRecord& record) {
  auto text = serialize_work_record(record);
  std::unique_lock lock(mutex_);
  if (mode_ != Mode::read_write) throw Error("READ_ONLY", "registry is read-only");
  for (const auto& i : record.idnos) {
    if (i.scheme == "URI") continue;
    auto it = index_.idnos.find(i);
    if (it != index_.idnos.end() && it->second != record.uri)
      throw Error("IDNO_CONFLICT", i.scheme + " " + i.value + " already identifies " + it->second.render());
  }
  write_file_atomic(record_path(root_, record.uri), text);
  if (auto old = records_.find(record.uri); old != records_.end()) unindex_record(index_, old->second);
  index_record(index_, record, relative_file(record.uri));
  records_[record.uri] = record;
  auto& next = next_ids_[EntityKind::work];
  if (record.uri.id >= next) {
    next = record.uri.id + 1;
    persist_mint_state();
  }
}

WorkRecord Registry::get(const EntityUri& uri) const {
  std::shared_lock lock(mutex_);
  auto it = records_.find(uri.without_fragment());
  if (it == records_.end()) throw Error("NOT_FOUND", uri.render() + " is not in the registry");
  return it->second;
}

bool Registry::contains(const EntityUri& uri) const {
  std::shared_lock lock(mutex_);
  return records_.contains(uri.without_fragment());
}

std::optional<EntityUri> Registry::find_by_idno(std::string_view scheme, std::string_view value) const {
  std::shared_lock lock(mutex_);
  if (scheme == "URI") {
    auto uri = EntityUri::try_parse(value);
    if (uri && records_.contains(*uri)) return uri;
    return std::nullopt;
  }
  auto it = index_.idnos.find(IdnoEntry{std::string(scheme), std::string(value)});
  if (it == index_.idnos.end()) return std::nullopt;
  return it->second;
}

std::vector<SearchHit> Registry::search_titles(std::string_view query, std::optional<std::string_view> lang) const {
  auto q = search_tokens(query);
  if (q.empty()) return {};
  std::shared_lock lock(mutex_);
  std::set<EntityUri> pool;
  for (const auto& token : q)
    if (auto it = index_.title_tokens.find(token); it != index_.title_tokens.end())
      pool.insert(it->second.begin(), it->second.end());
  std::vector<SearchHit> hits;
  for (const auto& uri : pool) {
    const auto& record = records_.at(uri);
    double best = 0.0;
    for (const auto& t : record.titles) {
      if (lang && t.lang != *lang) continue;
      best = std::max(best, jaccard(q, search_tokens(t.text.str())));
    }
    if (best > 0.0) hits.push_back({uri, display_headword(record), best});
  }
  std::sort(hits.begin(), hits.end(), [](const SearchHit& a, const SearchHit& b) {
    if (a.score != b.score) return a.score > b.score;
    return a.uri < b.uri;
  });
  return hits;
}

RegistryIndex Registry::index() const {
  std::shared_lock lock(mutex_);
  return index_;
}

std::vector<WorkRecord> Registry::records() const {
  std::shared_lock lock(mutex_);
  std::vector<WorkRecord> out;
  out.reserve(records_.size());
  for (const auto& [uri, record] : records_) out.push_back(record);
  return out;
}

fs::path Registry::record_path(const fs::path& root, const EntityUri& uri) { return root / relative_file(uri); }

RegistryIndex Registry::rebuild_index(const fs::path& root) {
  RegistryIndex index;
  for (const auto& [uri, record] : read_records(root)) index_record(index, record, relative_file(uri));
  return index;
}

void Registry::index_record(RegistryIndex& index, const WorkRecord& record, std::string file) {
  index.files[record.uri] = std::move(file);
  for (const auto& t : record.titles)
    for (const auto& token : search_tokens(t.text.str())) index.title_tokens[token].insert(record.uri);
  for (const auto& i : record.idnos)
    if (i.scheme != "URI") index.idnos[i] = record.uri;
}

void Registry::unindex_record(RegistryIndex& index, const WorkRecord& record) {
  index.files.erase(record.uri);
  for (auto it = index.title_tokens.begin(); it != index.title_tokens.end();) {
    it->second.erase(record.uri);
    it = it->second.empty() ? index.title_tokens.erase(it) : std::next(it);
  }
  std::erase_if(index.idnos, [&](const auto& kv) { return kv.second == record.uri; });
}

// ------------------------------------------------------------ directionality

std::string_view to_string(DirectionIssue issue) {
  return issue == DirectionIssue::both_sides ? "both_sides" : "derived_on_parent";
}

std::vector<InversePair> default_inverse_pairs(const NamespaceTable& ns) {
  return {
      {expand_curie("syriaca:hasVersion", ns), expand_curie("syriaca:isVersionOf", ns)},
      {expand_curie("syriaca:hasRecension", ns), expand_curie("syriaca:isRecensionOf", ns)},
      {expand_curie("bf:translation", ns), expand_curie("bf:translationOf", ns)},
  };
}

std::vector<DirectionViolation> lint_corpus_directionality(const std::vector<WorkRecord>& corpus,
                                                           const NamespaceTable& ns,
                                                           const std::vector<InversePair>& inverses) {
  std::map<std::string, std::string> forward_of;  // inverse -> forward
  for (const auto& p : inverses) forward_of[p.inverse] = p.forward;

  auto work_uri = [](const Reference& ref) -> std::optional<std::string> {
    if (ref.is_local()) return std::nullopt;
    auto uri = EntityUri::try_parse(ref.value);
    if (!uri || uri->kind != EntityKind::work || uri->fragment) return std::nullopt;
    return uri->render();
  };

  // (a, b, canonical predicate) with a < b -> records storing it
  std::map<std::tuple<std::string, std::string, std::string>, std::set<std::string>> stored;
  std::set<DirectionViolation> out;

  for (const auto& record : corpus) {
    const auto self = record.uri.render();
    for (const auto& rel : record.relations) {
      std::string predicate;
      try {
        predicate = expand_curie(rel.predicate, ns);
      } catch (const Error&) {
        continue;
      }
      auto inv = forward_of.find(predicate);
      const bool is_inverse = inv != forward_of.end();
      const auto canonical = is_inverse ? inv->second : predicate;
      for (const auto& s_ref : rel.subjects) {
        auto s = work_uri(s_ref);
        if (!s) continue;
        for (const auto& o_ref : rel.objects) {
          auto o = work_uri(o_ref);
          if (!o || *o == *s) continue;
          if (*s == self || *o == self) stored[{std::min(*s, *o), std::max(*s, *o), canonical}].insert(self);
          if (is_inverse && *o == self) out.insert({DirectionIssue::derived_on_parent, self, *s, canonical});
        }
      }
    }
  }
  for (const auto& [key, holders] : stored)
    if (holders.size() > 1)
      out.insert({DirectionIssue::both_sides, std::get<0>(key), std::get<1>(key), std::get<2>(key)});
  return {out.begin(), out.end()};
}

}  // namespace workauth
