#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <shared_mutex>
#include <string>
#include <string_view>
#include <vector>

#include "workauth/model.hpp"
#include "workauth/namespaces.hpp"

namespace workauth {

/// Derived lookup tables; always rebuildable from the record files.
struct RegistryIndex {
  std::map<EntityUri, std::string> files;  // uri -> path relative to the root
  std::map<std::string, std::set<EntityUri>> title_tokens;
  std::map<IdnoEntry, EntityUri> idnos;  // non-URI concordances

  friend bool operator==(const RegistryIndex&, const RegistryIndex&) = default;
};

struct SearchHit {
  EntityUri uri;
  std::string headword;
  double score = 0.0;

  friend bool operator==(const SearchHit&, const SearchHit&) = default;
};

/// One TEI file per work under `{root}/works/{id}.xml`; minting state in
/// `{root}/mint.json`. Readers share a lock, every mutation takes the
/// single writer lock.
class Registry {
 public:
  enum class Mode { read_only, read_write };

  /// Loads every record under root. A read-write registry creates missing
  /// directories. Throws Error("REGISTRY_INVALID") for unreadable records.
  explicit Registry(std::filesystem::path root, Mode mode = Mode::read_write);

  Registry(const Registry&) = delete;
  Registry& operator=(const Registry&) = delete;

  const std::filesystem::path& root() const { return root_; }
  bool writable() const { return mode_ == Mode::read_write; }

  /// Next id for kind; strictly increasing and never reused.
  /// Throws Error("READ_ONLY").
  EntityUri mint(EntityKind kind);
  std::uint64_t next_id(EntityKind kind) const;

  /// Validates, writes atomically (temp file + rename), updates indexes.
  /// Throws RecordRejected, Error("IDNO_CONFLICT"), Error("READ_ONLY").
  void put(const WorkRecord& record);
  /// Throws Error("NOT_FOUND").
  WorkRecord get(const EntityUri& uri) const;
  bool contains(const EntityUri& uri) const;
  std::optional<EntityUri> find_by_idno(std::string_view scheme, std::string_view value) const;

  /// Jaccard overlap of query tokens (>= 2 code points) with each title;
  /// best title per work; ties by ascending id.
  std::vector<SearchHit> search_titles(std::string_view query,
                                       std::optional<std::string_view> lang = std::nullopt) const;

  RegistryIndex index() const;
  std::vector<WorkRecord> records() const;

  static std::filesystem::path record_path(const std::filesystem::path& root, const EntityUri& uri);
  /// Reads the record files alone and derives the index.
  static RegistryIndex rebuild_index(const std::filesystem::path& root);

 private:
  void load();
  void persist_mint_state();
  static void index_record(RegistryIndex& index, const WorkRecord& record, std::string file);
  static void unindex_record(RegistryIndex& index, const WorkRecord& record);

  std::filesystem::path root_;
  Mode mode_;
  mutable std::shared_mutex mutex_;
  std::map<EntityUri, WorkRecord> records_;
  RegistryIndex index_;
  std::map<EntityKind, std::uint64_t> next_ids_;
};

/// Display headword: English headword, else any headword, else first title.
std::string display_headword(const WorkRecord& record);

/// Atomic replace: write a sibling temp file, then rename over target.
void write_file_atomic(const std::filesystem::path& target, std::string_view contents);

enum class DirectionIssue { both_sides, derived_on_parent };
std::string_view to_string(DirectionIssue issue);

struct DirectionViolation {
  DirectionIssue issue = DirectionIssue::both_sides;
  /// both_sides: the two works (a < b). derived_on_parent: a = storing
  /// (parent) record, b = derived work named as subject.
  std::string a;
  std::string b;
  std::string predicate;  // canonical (non-inverse) predicate IRI

  friend bool operator==(const DirectionViolation&, const DirectionViolation&) = default;
  friend auto operator<=>(const DirectionViolation&, const DirectionViolation&) = default;
};

/// Work-to-work predicates with their declared inverses. `forward` points
/// from parent to derived work; `inverse` from derived to parent.
struct InversePair {
  std::string forward;
  std::string inverse;
};
std::vector<InversePair> default_inverse_pairs(const NamespaceTable& ns = NamespaceTable::defaults());

/// Flags relationships stored on both members' records and derived-work
/// relations stored on the parent. Sorted, deduplicated.
std::vector<DirectionViolation> lint_corpus_directionality(
    const std::vector<WorkRecord>& corpus, const NamespaceTable& ns = NamespaceTable::defaults(),
    const std::vector<InversePair>& inverses = default_inverse_pairs());

}  // namespace workauth
