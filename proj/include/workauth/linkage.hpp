#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "workauth/model.hpp"

// Catalogue ingestion, blocking, scoring and editorial clustering.
namespace workauth::linkage {

struct LangText {
  std::string lang;
  std::string text;

  friend bool operator==(const LangText&, const LangText&) = default;
};

struct ManuscriptSource {
  EntityUri manuscript;
  Locus locus;

  friend bool operator==(const ManuscriptSource&, const ManuscriptSource&) = default;
};

/// A work as described by a single catalogue item.
struct WorkStub {
  std::string stub_id;
  std::vector<LangText> titles;
  std::optional<EntityUri> author_uri;
  std::optional<std::string> author_name;
  std::optional<LangText> incipit;
  std::optional<ManuscriptSource> source_ms;
  std::string provenance;

  friend bool operator==(const WorkStub&, const WorkStub&) = default;
};

struct IngestWarning {
  std::size_t item_index = 0;
  std::string message;
};

struct IngestResult {
  std::string document_id;
  std::vector<WorkStub> stubs;
  std::vector<IngestWarning> warnings;
};

/// Reads the catalogue subset:
///   <catalogue xml:id="..." source="...">
///     <msDesc><msIdentifier><idno type="URI">...</idno></msIdentifier>
///       <msItem> locus? author? title* incipit? bibl? </msItem> ...
///     </msDesc>
///   </catalogue>
/// msItem may also appear directly under the root (no manuscript).
/// Stub ids are "{document id}-{1-based item index}". A blank document
/// yields no stubs.
IngestResult ingest_catalogue_entries(std::string_view document);

/// Comparable view of a stub or an existing work record.
struct LinkItem {
  std::string id;
  std::vector<std::vector<std::string>> title_tokens;
  std::optional<EntityUri> author;
  std::optional<std::vector<std::string>> incipit_tokens;

  friend bool operator==(const LinkItem&, const LinkItem&) = default;
};

LinkItem make_item(const WorkStub& stub);
LinkItem make_item(const WorkRecord& record);

struct Features {
  std::optional<double> title_sim;
  std::optional<double> author_match;
  std::optional<double> incipit_sim;

  friend bool operator==(const Features&, const Features&) = default;
};

struct Weights {
  double title = 0.5;
  double author = 0.3;
  double incipit = 0.2;
};

struct Thresholds {
  double auto_merge = 0.85;
  double review = 0.55;

  /// Throws Error("CONFIG_INVALID") unless auto_merge > review and both in [0,1].
  void check() const;
};

enum class Band { auto_merge, review, reject };
std::string_view to_string(Band band);
Band band_from_string(std::string_view text);

struct MatchCandidate {
  std::string candidate_id;
  std::string left;
  std::string right;
  double score = 0.0;
  Features features;
  Band band = Band::reject;

  friend bool operator==(const MatchCandidate&, const MatchCandidate&) = default;
};

enum class Verdict { accept, reject };
std::string_view to_string(Verdict verdict);
Verdict verdict_from_string(std::string_view text);

struct MatchDecision {
  std::string candidate_id;
  Verdict verdict = Verdict::accept;
  std::string editor;
  /// ISO-8601 UTC instant; later strings are later decisions.
  std::string timestamp;

  friend bool operator==(const MatchDecision&, const MatchDecision&) = default;
};

/// "{left}~{right}" with left < right.
std::string candidate_id_for(std::string_view a, std::string_view b);

/// Block keys: "a:{author uri}", "t:{title token of >= 4 code points}",
/// "i:{first five incipit tokens}".
std::vector<std::string> block_keys(const LinkItem& item);

/// Unscored pairs sharing at least one block key, sorted by (left, right).
/// OpenMP-parallel over items.
std::vector<MatchCandidate> candidate_pairs(const std::vector<LinkItem>& items);
/// Serial reference for candidate_pairs: inverted index, one thread.
std::vector<MatchCandidate> candidate_pairs_serial(const std::vector<LinkItem>& items);

/// Throws Error("NO_FEATURES") when neither side supports any feature.
std::pair<double, Features> score_pair(const LinkItem& a, const LinkItem& b,
                                       const Weights& weights = {});

/// Half-open bands: [auto, 1] auto, [review, auto) review, else reject.
Band classify_candidate(double score, const Thresholds& thresholds = {});

/// Scores and bands every candidate in place. Pairs with no comparable
/// feature score 0 and are rejected. OpenMP-parallel over candidates.
void score_candidates(std::vector<MatchCandidate>& candidates, const std::vector<LinkItem>& items,
                      const Weights& weights = {}, const Thresholds& thresholds = {});
/// Serial reference for score_candidates.
void score_candidates_serial(std::vector<MatchCandidate>& candidates,
                             const std::vector<LinkItem>& items, const Weights& weights = {},
                             const Thresholds& thresholds = {});

/// Blocking + scoring in one call.
std::vector<MatchCandidate> link(const std::vector<LinkItem>& items, const Weights& weights = {},
                                 const Thresholds& thresholds = {});

struct Cluster {
  std::string cluster_id;  // lexicographically smallest member
  std::vector<std::string> members;

  friend bool operator==(const Cluster&, const Cluster&) = default;
};

/// Effective state of one candidate after folding the decision log.
enum class CandidateState { undecided, accepted, rejected };

/// Latest decision per (candidate, editor) by timestamp, ties by log order;
/// any editor's reject vetoes, otherwise any accept accepts.
std::map<std::string, CandidateState> fold_decisions(const std::vector<MatchDecision>& decisions);

/// Union-find over accepted pairs plus auto-band pairs nobody rejected.
/// items lists every item to partition (candidate endpoints are added).
/// Throws Error("UNKNOWN_CANDIDATE") listing unknown ids.
std::vector<Cluster> apply_decisions(const std::vector<std::string>& items,
                                     const std::vector<MatchCandidate>& candidates,
                                     const std::vector<MatchDecision>& decisions);

/// Builds the disambiguated record for one cluster. Existing records keep
/// their witnesses, notes and relations; stubs contribute titles, authors,
/// incipits and manuscript witnesses linked by lawd:embodies.
/// Throws Error("MERGE_CONFLICT") when two members disagree on an idno scheme.
WorkRecord merge_cluster(const std::vector<WorkStub>& stubs, const EntityUri& minted,
                         const std::vector<WorkRecord>& records = {});

}  // namespace workauth::linkage
