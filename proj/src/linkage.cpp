#include "workauth/linkage.hpp"

#include <omp.h>

#include <algorithm>
#include <numeric>
#include <set>
#include <tuple>
#include <unordered_map>

#include "workauth/error.hpp"
#include "workauth/text.hpp"
#include "workauth/xml.hpp"

namespace workauth::linkage {

// ------------------------------------------------------------ ingestion

namespace {

std::string text_of(const xml::Element& e) { return normalize_space(e.text()); }

std::string attr_or(const xml::Element& e, std::string_view key, std::string fallback = {}) {
  if (auto v = e.attr(key)) return *v;
  return fallback;
}

struct ItemContext {
  std::optional<EntityUri> manuscript;
};

std::optional<EntityUri> ms_uri(const xml::Element& ms_desc) {
  if (auto ident = ms_desc.first_child("msIdentifier"))
    for (const auto* idno : ident->children_named("idno"))
      if (attr_or(*idno, "type") == "URI") return EntityUri::try_parse(text_of(*idno));
  return std::nullopt;
}

void collect_items(const xml::Element& e, ItemContext ctx, std::vector<std::pair<const xml::Element*, ItemContext>>& out) {
  for (const auto* child : e.child_elements()) {
    if (child->name == "msItem") {
      out.emplace_back(child, ctx);
    } else if (child->name == "msDesc") {
      ItemContext inner{ms_uri(*child)};
      collect_items(*child, inner, out);
    } else if (child->name == "msContents") {
      collect_items(*child, ctx, out);
    }
  }
}

}  // namespace

IngestResult ingest_catalogue_entries(std::string_view document) {
  IngestResult result;
  if (normalize_space(document).empty()) return result;
  auto root = xml::parse(document);
  result.document_id = attr_or(root, "xml:id", "catalogue");
  const auto citation = attr_or(root, "source", result.document_id);

  std::vector<std::pair<const xml::Element*, ItemContext>> items;
  collect_items(root, {}, items);

  for (std::size_t i = 0; i < items.size(); ++i) {
    const auto& [item, ctx] = items[i];
    const auto index = i + 1;
    WorkStub stub;
    stub.stub_id = result.document_id + "-" + std::to_string(index);
    stub.provenance = citation;

    std::optional<Locus> locus;
    for (const auto* child : item->child_elements()) {
      const auto& name = child->name;
      if (name == "title") {
        auto text = text_of(*child);
        if (!text.empty()) stub.titles.push_back({attr_or(*child, "xml:lang", "und"), text});
      } else if (name == "author") {
        if (auto ref = child->attr("ref")) {
          auto uri = EntityUri::try_parse(*ref);
          if (uri && uri->kind == EntityKind::person && !uri->fragment) stub.author_uri = *uri;
          else result.warnings.push_back({index, "author ref '" + *ref + "' is not a person URI; ignored"});
        }
        auto name_text = text_of(*child);
        if (!name_text.empty()) stub.author_name = name_text;
      } else if (name == "incipit") {
        auto text = text_of(*child);
        if (!text.empty()) stub.incipit = LangText{attr_or(*child, "xml:lang", "und"), text};
      } else if (name == "locus") {
        locus = Locus{attr_or(*child, "from"), attr_or(*child, "to"), text_of(*child), std::nullopt};
      } else if (name == "bibl") {
        auto text = text_of(*child);
        if (!text.empty()) stub.provenance += ", " + text;
      }
    }
    if (stub.titles.empty() && !stub.incipit) {
      result.warnings.push_back({index, "msItem has neither title nor incipit; skipped"});
      continue;
    }
    if (ctx.manuscript) stub.source_ms = ManuscriptSource{*ctx.manuscript, locus.value_or(Locus{})};
    result.stubs.push_back(std::move(stub));
  }
  return result;
}

// ------------------------------------------------------------ items and keys

LinkItem make_item(const WorkStub& stub) {
  LinkItem item;
  item.id = stub.stub_id;
  for (const auto& t : stub.titles) item.title_tokens.push_back(normalize_title(t.text, t.lang));
  item.author = stub.author_uri;
  if (stub.incipit) item.incipit_tokens = normalize_title(stub.incipit->text, stub.incipit->lang);
  return item;
}

LinkItem make_item(const WorkRecord& record) {
  LinkItem item;
  item.id = record.uri.render();
  for (const auto& t : record.titles) item.title_tokens.push_back(normalize_title(t.text.str(), t.lang));
  for (const auto& a : record.authors)
    if (a.person) {
      item.author = a.person;
      break;
    }
  for (const auto& n : record.notes)
    if (n.type == NoteType::incipit && !n.segments.empty()) {
      item.incipit_tokens = normalize_title(n.segments.front().text);
      break;
    }
  return item;
}

std::string candidate_id_for(std::string_view a, std::string_view b) {
  if (b < a) std::swap(a, b);
  return std::string(a) + "~" + std::string(b);
}

std::vector<std::string> block_keys(const LinkItem& item) {
  std::set<std::string> keys;
  if (item.author) keys.insert("a:" + item.author->render());
  for (const auto& title : item.title_tokens)
    for (const auto& token : title)
      if (codepoint_length(token) >= 4) keys.insert("t:" + token);
  if (item.incipit_tokens && !item.incipit_tokens->empty()) {
    auto n = std::min<std::size_t>(5, item.incipit_tokens->size());
    std::vector<std::string> prefix(item.incipit_tokens->begin(), item.incipit_tokens->begin() + n);
    keys.insert("i:" + join(prefix, " "));
  }
  return {keys.begin(), keys.end()};
}

namespace {

using Postings = std::unordered_map<std::string, std::vector<std::size_t>>;

Postings build_postings(const std::vector<LinkItem>& items) {
  Postings postings;
  for (std::size_t i = 0; i < items.size(); ++i)
    for (auto& key : block_keys(items[i])) postings[std::move(key)].push_back(i);
  return postings;
}

MatchCandidate unscored(const LinkItem& a, const LinkItem& b) {
  MatchCandidate c;
  c.left = std::min(a.id, b.id);
  c.right = std::max(a.id, b.id);
  c.candidate_id = candidate_id_for(c.left, c.right);
  return c;
}

void sort_candidates(std::vector<MatchCandidate>& out) {
  std::sort(out.begin(), out.end(),
            [](const MatchCandidate& x, const MatchCandidate& y) { return std::tie(x.left, x.right) < std::tie(y.left, y.right); });
}

}  // namespace

std::vector<MatchCandidate> candidate_pairs_serial(const std::vector<LinkItem>& items) {
  auto postings = build_postings(items);
  std::set<std::pair<std::size_t, std::size_t>> pairs;
  for (const auto& [key, list] : postings)
    for (std::size_t x = 0; x < list.size(); ++x)
      for (std::size_t y = x + 1; y < list.size(); ++y) pairs.emplace(list[x], list[y]);
  std::vector<MatchCandidate> out;
  out.reserve(pairs.size());
  for (const auto& [i, j] : pairs) out.push_back(unscored(items[i], items[j]));
  sort_candidates(out);
  return out;
}

std::vector<MatchCandidate> candidate_pairs(const std::vector<LinkItem>& items) {
  auto postings = build_postings(items);
  std::vector<std::vector<std::string>> keys(items.size());
  for (std::size_t i = 0; i < items.size(); ++i) keys[i] = block_keys(items[i]);

  const auto n = static_cast<std::ptrdiff_t>(items.size());
  std::vector<std::vector<MatchCandidate>> per_thread(static_cast<std::size_t>(omp_get_max_threads()));
#pragma omp parallel
  {
    auto& local = per_thread[static_cast<std::size_t>(omp_get_thread_num())];
    std::vector<std::size_t> neighbours;
#pragma omp for schedule(dynamic, 16)
    for (std::ptrdiff_t i = 0; i < n; ++i) {
      const auto ui = static_cast<std::size_t>(i);
      neighbours.clear();
      for (const auto& key : keys[ui])
        for (auto j : postings.at(key))
          if (j > ui) neighbours.push_back(j);
      std::sort(neighbours.begin(), neighbours.end());
      neighbours.erase(std::unique(neighbours.begin(), neighbours.end()), neighbours.end());
      for (auto j : neighbours) local.push_back(unscored(items[ui], items[j]));
    }
  }
  std::vector<MatchCandidate> out;
  for (auto& local : per_thread) std::move(local.begin(), local.end(), std::back_inserter(out));
  sort_candidates(out);
  return out;
}

// ------------------------------------------------------------ scoring

namespace {

Features compute_features(const LinkItem& a, const LinkItem& b) {
  Features f;
  if (!a.title_tokens.empty() && !b.title_tokens.empty()) {
    double best = 0.0;
    for (const auto& ta : a.title_tokens)
      for (const auto& tb : b.title_tokens) best = std::max(best, jaccard(ta, tb));
    f.title_sim = best;
  }
  if (a.author && b.author) f.author_match = *a.author == *b.author ? 1.0 : 0.0;
  if (a.incipit_tokens && b.incipit_tokens)
    f.incipit_sim = edit_similarity(join(*a.incipit_tokens, " "), join(*b.incipit_tokens, " "));
  return f;
}

std::optional<double> weighted_score(const Features& f, const Weights& w) {
  double num = 0.0, den = 0.0;
  auto add = [&](const std::optional<double>& value, double weight) {
    if (!value) return;
    num += weight * *value;
    den += weight;
  };
  add(f.title_sim, w.title);
  add(f.author_match, w.author);
  add(f.incipit_sim, w.incipit);
  if (den <= 0.0) return std::nullopt;
  return std::clamp(num / den, 0.0, 1.0);
}

void score_one(MatchCandidate& c, const LinkItem& a, const LinkItem& b, const Weights& w, const Thresholds& t) {
  c.features = compute_features(a, b);
  auto score = weighted_score(c.features, w);
  c.score = score.value_or(0.0);
  c.band = score ? classify_candidate(c.score, t) : Band::reject;
}

std::unordered_map<std::string, std::size_t> index_by_id(const std::vector<LinkItem>& items) {
  std::unordered_map<std::string, std::size_t> out;
  for (std::size_t i = 0; i < items.size(); ++i) out.emplace(items[i].id, i);
  return out;
}

const LinkItem& item_for(const std::unordered_map<std::string, std::size_t>& index,
                         const std::vector<LinkItem>& items, const std::string& id) {
  auto it = index.find(id);
  if (it == index.end()) throw Error("UNKNOWN_ITEM", "candidate refers to unknown item '" + id + "'");
  return items[it->second];
}

}  // namespace

std::pair<double, Features> score_pair(const LinkItem& a, const LinkItem& b, const Weights& weights) {
  auto f = compute_features(a, b);
  auto score = weighted_score(f, weights);
  if (!score)
    throw Error("NO_FEATURES", "no comparable feature between '" + a.id + "' and '" + b.id + "'");
  return {*score, f};
}

void Thresholds::check() const {
  if (!(auto_merge > review) || review < 0.0 || auto_merge > 1.0)
    throw Error("CONFIG_INVALID", "thresholds need 0 <= review < auto <= 1 (auto=" + std::to_string(auto_merge) +
                                      ", review=" + std::to_string(review) + ")");
}

Band classify_candidate(double score, const Thresholds& thresholds) {
  thresholds.check();
  if (score >= thresholds.auto_merge) return Band::auto_merge;
  if (score >= thresholds.review) return Band::review;
  return Band::reject;
}

void score_candidates_serial(std::vector<MatchCandidate>& candidates, const std::vector<LinkItem>& items,
                             const Weights& weights, const Thresholds& thresholds) {
  thresholds.check();
  auto index = index_by_id(items);
  for (auto& c : candidates) score_one(c, item_for(index, items, c.left), item_for(index, items, c.right), weights, thresholds);
}

void score_candidates(std::vector<MatchCandidate>& candidates, const std::vector<LinkItem>& items,
                      const Weights& weights, const Thresholds& thresholds) {
  thresholds.check();
  auto index = index_by_id(items);
  // Resolve endpoints up front so the parallel loop cannot throw.
  std::vector<std::pair<const LinkItem*, const LinkItem*>> sides;
  sides.reserve(candidates.size());
  for (const auto& c : candidates) sides.emplace_back(&item_for(index, items, c.left), &item_for(index, items, c.right));
  const auto n = static_cast<std::ptrdiff_t>(candidates.size());
#pragma omp parallel for schedule(dynamic, 64)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    const auto ui = static_cast<std::size_t>(i);
    score_one(candidates[ui], *sides[ui].first, *sides[ui].second, weights, thresholds);
  }
}

std::vector<MatchCandidate> link(const std::vector<LinkItem>& items, const Weights& weights,
                                 const Thresholds& thresholds) {
  auto candidates = candidate_pairs(items);
  score_candidates(candidates, items, weights, thresholds);
  return candidates;
}

std::string_view to_string(Band band) {
  switch (band) {
    case Band::auto_merge: return "auto";
    case Band::review: return "review";
    case Band::reject: return "reject";
  }
  return "reject";
}

Band band_from_string(std::string_view text) {
  if (text == "auto") return Band::auto_merge;
  if (text == "review") return Band::review;
  if (text == "reject") return Band::reject;
  throw Error("BAND_INVALID", "unknown band '" + std::string(text) + "'");
}

std::string_view to_string(Verdict verdict) { return verdict == Verdict::accept ? "accept" : "reject"; }

Verdict verdict_from_string(std::string_view text) {
  if (text == "accept") return Verdict::accept;
  if (text == "reject") return Verdict::reject;
  throw Error("VERDICT_INVALID", "unknown verdict '" + std::string(text) + "'");
}

// ------------------------------------------------------------ decisions

std::map<std::string, CandidateState> fold_decisions(const std::vector<MatchDecision>& decisions) {
  // (candidate, editor) -> (timestamp, log position, verdict)
  std::map<std::pair<std::string, std::string>, std::tuple<std::string, std::size_t, Verdict>> latest;
  for (std::size_t i = 0; i < decisions.size(); ++i) {
    const auto& d = decisions[i];
    auto key = std::pair{d.candidate_id, d.editor};
    auto entry = std::tuple{d.timestamp, i, d.verdict};
    auto it = latest.find(key);
    if (it == latest.end()) latest.emplace(key, entry);
    else if (std::tie(std::get<0>(entry), std::get<1>(entry)) >= std::tie(std::get<0>(it->second), std::get<1>(it->second)))
      it->second = entry;
  }
  std::map<std::string, CandidateState> state;
  for (const auto& [key, entry] : latest) {
    auto& s = state[key.first];
    if (std::get<2>(entry) == Verdict::reject) s = CandidateState::rejected;
    else if (s != CandidateState::rejected) s = CandidateState::accepted;
  }
  return state;
}

namespace {

class UnionFind {
 public:
  explicit UnionFind(std::size_t n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), 0); }

  std::size_t find(std::size_t x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }

  void unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a != b) parent_[std::max(a, b)] = std::min(a, b);
  }

 private:
  std::vector<std::size_t> parent_;
};

}  // namespace

std::vector<Cluster> apply_decisions(const std::vector<std::string>& items,
                                     const std::vector<MatchCandidate>& candidates,
                                     const std::vector<MatchDecision>& decisions) {
  std::set<std::string> known;
  for (const auto& c : candidates) known.insert(c.candidate_id);
  std::set<std::string> unknown;
  for (const auto& d : decisions)
    if (!known.contains(d.candidate_id)) unknown.insert(d.candidate_id);
  if (!unknown.empty()) {
    std::string list;
    for (const auto& id : unknown) list += (list.empty() ? "" : ", ") + id;
    throw Error("UNKNOWN_CANDIDATE", "decisions reference unknown candidates: " + list);
  }

  std::set<std::string> all(items.begin(), items.end());
  for (const auto& c : candidates) {
    all.insert(c.left);
    all.insert(c.right);
  }
  std::vector<std::string> ids(all.begin(), all.end());
  std::unordered_map<std::string, std::size_t> pos;
  for (std::size_t i = 0; i < ids.size(); ++i) pos.emplace(ids[i], i);

  auto state = fold_decisions(decisions);
  UnionFind uf(ids.size());
  for (const auto& c : candidates) {
    auto it = state.find(c.candidate_id);
    auto s = it == state.end() ? CandidateState::undecided : it->second;
    bool merge = s == CandidateState::accepted || (s == CandidateState::undecided && c.band == Band::auto_merge);
    if (merge) uf.unite(pos.at(c.left), pos.at(c.right));
  }

  std::map<std::size_t, std::vector<std::string>> groups;
  for (std::size_t i = 0; i < ids.size(); ++i) groups[uf.find(i)].push_back(ids[i]);
  std::vector<Cluster> out;
  for (auto& [root, members] : groups) out.push_back({members.front(), std::move(members)});
  std::sort(out.begin(), out.end(), [](const Cluster& a, const Cluster& b) { return a.cluster_id < b.cluster_id; });
  return out;
}

// ------------------------------------------------------------ merging

namespace {

std::string norm_key(std::string_view lang, std::string_view text) {
  return std::string(lang) + "|" + join(normalize_title(text), " ");
}

void add_source(std::vector<LocalPointer>& sources, const std::optional<std::string>& id) {
  if (!id) return;
  LocalPointer p{*id};
  if (std::find(sources.begin(), sources.end(), p) == sources.end()) sources.push_back(p);
}

std::string witness_key(const BiblWitness& w) {
  std::string key;
  if (w.ms_identifier) {
    key = "ms:" + w.ms_identifier->uri.render();
    if (w.locus) key += "|" + w.locus->from + "-" + w.locus->to;
    return key;
  }
  key = "pub:" + (w.record_ptr ? w.record_ptr->render() : "#" + w.local_id);
  for (const auto& r : w.cited_ranges) key += "|" + r.unit + ":" + r.from + "-" + r.to;
  return key;
}

class Merger {
 public:
  explicit Merger(const EntityUri& uri) : uri_(uri) {
    out_.uri = uri;
    out_.idnos.push_back({"URI", uri.render()});
  }

  void add_record(const WorkRecord& r) {
    std::map<std::string, std::string> rename;
    for (const auto& w : r.witnesses) {
      auto key = witness_key(w);
      if (auto it = witness_by_key_.find(key); it != witness_by_key_.end()) {
        rename[w.local_id] = it->second;
        continue;
      }
      auto id = taken_.contains(w.local_id) ? fresh("bib") : w.local_id;
      rename[w.local_id] = id;
      BiblWitness copy = w;
      copy.local_id = id;
      insert_witness(std::move(copy), key);
    }
    auto map_ptrs = [&](std::vector<LocalPointer> ptrs) {
      std::vector<LocalPointer> out;
      for (auto& p : ptrs) {
        if (auto it = rename.find(p.target_id); it != rename.end()) p.target_id = it->second;
        if (std::find(out.begin(), out.end(), p) == out.end()) out.push_back(p);
      }
      return out;
    };
    auto map_ref = [&](Reference ref) {
      if (ref.is_local()) {
        if (auto it = rename.find(std::string(ref.local_id())); it != rename.end()) ref.value = "#" + it->second;
      } else if (ref.value == r.uri.render()) {
        ref.value = uri_.render();
      }
      return ref;
    };

    for (auto a : r.authors) {
      a.sources = map_ptrs(a.sources);
      add_author(std::move(a));
    }
    for (auto t : r.titles) {
      t.sources = map_ptrs(t.sources);
      add_title(std::move(t));
    }
    if (r.text_lang && !out_.text_lang) {
      out_.text_lang = r.text_lang;
      out_.text_lang->sources = map_ptrs(out_.text_lang->sources);
    }
    for (auto n : r.notes) {
      n.sources = map_ptrs(n.sources);
      add_note(std::move(n));
    }
    for (const auto& i : r.idnos)
      if (i.scheme != "URI") add_idno(i);
    for (auto rel : r.relations) {
      for (auto& s : rel.subjects) s = map_ref(s);
      for (auto& o : rel.objects) o = map_ref(o);
      rel.sources = map_ptrs(rel.sources);
      if (rel.local_id && taken_.contains(*rel.local_id)) rel.local_id = fresh("rel");
      if (rel.local_id) taken_.insert(*rel.local_id);
      out_.relations.push_back(std::move(rel));
    }
    for (const auto& s : r.subjects)
      if (std::find(out_.subjects.begin(), out_.subjects.end(), s) == out_.subjects.end()) out_.subjects.push_back(s);
    for (const auto& e : r.editors)
      if (std::find(out_.editors.begin(), out_.editors.end(), e) == out_.editors.end()) out_.editors.push_back(e);
    out_.change_log.insert(out_.change_log.end(), r.change_log.begin(), r.change_log.end());
    out_.extensions.insert(out_.extensions.end(), r.extensions.begin(), r.extensions.end());
  }

  void add_stub(const WorkStub& s) {
    std::optional<std::string> wid;
    if (s.source_ms) {
      BiblWitness w;
      w.witness_class = std::string(kWrittenWorkClass);
      w.ms_identifier = MsIdentifier{};
      w.ms_identifier->uri = s.source_ms->manuscript;
      w.locus = s.source_ms->locus;
      auto key = witness_key(w);
      if (auto it = witness_by_key_.find(key); it != witness_by_key_.end()) {
        wid = it->second;
      } else {
        w.local_id = fresh("bib");
        wid = w.local_id;
        insert_witness(std::move(w), key);
        RelationTriple rel;
        rel.rel_type = "mss";
        rel.subjects = {Reference{"#" + *wid}};
        rel.predicate = "lawd:embodies";
        rel.objects = {Reference{uri_.render()}};
        out_.relations.push_back(std::move(rel));
      }
    }
    for (const auto& t : s.titles) {
      TitleEntry title;
      title.lang = t.lang;
      title.text = InlineText::plain(normalize_space(t.text));
      add_source(title.sources, wid);
      add_title(std::move(title));
    }
    if (s.author_uri || s.author_name) {
      AuthorRef a;
      a.person = s.author_uri;
      a.display = s.author_name.value_or("");
      add_source(a.sources, wid);
      add_author(std::move(a));
    }
    if (s.incipit) {
      NotePart n;
      n.type = NoteType::incipit;
      n.quoted = true;
      n.segments.push_back({s.incipit->lang, normalize_space(s.incipit->text)});
      add_source(n.sources, wid);
      add_note(std::move(n));
    }
  }

  WorkRecord finish() {
    // Keep at most one headword per language.
    std::set<std::string> headword_langs;
    for (auto& t : out_.titles) {
      if (!t.is_headword()) continue;
      if (!headword_langs.insert(t.lang).second) std::erase(t.tags, std::string(kHeadwordTag));
    }
    return std::move(out_);
  }

 private:
  std::string fresh(std::string_view stem) {
    while (true) {
      auto id = std::string(stem) + std::to_string(uri_.id) + "-" + std::to_string(++counter_);
      if (!taken_.contains(id)) {
        taken_.insert(id);
        return id;
      }
    }
  }

  void insert_witness(BiblWitness w, const std::string& key) {
    taken_.insert(w.local_id);
    witness_by_key_.emplace(key, w.local_id);
    out_.witnesses.push_back(std::move(w));
  }

  void add_title(TitleEntry t) {
    auto key = norm_key(t.lang, t.text.str());
    if (auto it = title_by_key_.find(key); it != title_by_key_.end()) {
      auto& existing = out_.titles[it->second];
      for (const auto& p : t.sources) add_source(existing.sources, p.target_id);
      return;
    }
    if (t.local_id.empty() || taken_.contains(t.local_id)) t.local_id = fresh("name");
    taken_.insert(t.local_id);
    title_by_key_.emplace(key, out_.titles.size());
    out_.titles.push_back(std::move(t));
  }

  void add_author(AuthorRef a) {
    for (auto& existing : out_.authors) {
      bool same = a.person ? existing.person == a.person
                           : (!existing.person && existing.display_name() == a.display_name());
      if (same) {
        for (const auto& p : a.sources) add_source(existing.sources, p.target_id);
        if (existing.name.empty() && existing.display.empty()) existing.display = a.display;
        return;
      }
    }
    out_.authors.push_back(std::move(a));
  }

  void add_note(NotePart n) {
    std::string key(to_string(n.type));
    for (const auto& seg : n.segments) key += "#" + norm_key(seg.lang.value_or(""), seg.text);
    if (auto it = note_by_key_.find(key); it != note_by_key_.end()) {
      auto& existing = out_.notes[it->second];
      for (const auto& p : n.sources) add_source(existing.sources, p.target_id);
      return;
    }
    note_by_key_.emplace(key, out_.notes.size());
    out_.notes.push_back(std::move(n));
  }

  void add_idno(const IdnoEntry& i) {
    for (const auto& existing : out_.idnos) {
      if (existing.scheme != i.scheme) continue;
      if (existing.value == i.value) return;
      throw Error("MERGE_CONFLICT", "conflicting " + i.scheme + " identifiers: '" + existing.value + "' and '" +
                                        i.value + "'");
    }
    out_.idnos.push_back(i);
  }

  EntityUri uri_;
  WorkRecord out_;
  std::set<std::string> taken_;
  std::map<std::string, std::string> witness_by_key_;
  std::map<std::string, std::size_t> title_by_key_;
  std::map<std::string, std::size_t> note_by_key_;
  std::size_t counter_ = 0;
};

}  // namespace

WorkRecord merge_cluster(const std::vector<WorkStub>& stubs, const EntityUri& minted,
                         const std::vector<WorkRecord>& records) {
  if (minted.kind != EntityKind::work || minted.fragment)
    throw Error("URI_INVALID", minted.render() + " is not a work URI");
  std::vector<const WorkRecord*> sorted_records;
  for (const auto& r : records) sorted_records.push_back(&r);
  std::sort(sorted_records.begin(), sorted_records.end(), [](auto* a, auto* b) { return a->uri < b->uri; });
  std::vector<const WorkStub*> sorted_stubs;
  for (const auto& s : stubs) sorted_stubs.push_back(&s);
  std::sort(sorted_stubs.begin(), sorted_stubs.end(), [](auto* a, auto* b) { return a->stub_id < b->stub_id; });

  Merger merger(minted);
  for (const auto* r : sorted_records) merger.add_record(*r);
  for (const auto* s : sorted_stubs) merger.add_stub(*s);
  return merger.finish();
}

}  // namespace workauth::linkage
