#include "workauth/validate.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <tuple>

#include "workauth/lang.hpp"

namespace workauth {

std::string_view to_string(Severity severity) {
  return severity == Severity::error ? "error" : "warning";
}

bool ValidationReport::valid() const { return error_count() == 0; }

std::size_t ValidationReport::error_count() const {
  return static_cast<std::size_t>(
      std::count_if(items.begin(), items.end(), [](const auto& i) { return i.severity == Severity::error; }));
}

std::size_t ValidationReport::warning_count() const { return items.size() - error_count(); }

bool ValidationReport::has_code(std::string_view code) const {
  return std::any_of(items.begin(), items.end(), [&](const auto& i) { return i.code == code; });
}

void ValidationReport::add(Severity severity, std::string code, std::string path, std::string message) {
  items.push_back({severity, std::move(code), std::move(path), std::move(message)});
}

void ValidationReport::append(const ValidationReport& other) {
  items.insert(items.end(), other.items.begin(), other.items.end());
}

void ValidationReport::sort() {
  std::stable_sort(items.begin(), items.end(), [](const auto& a, const auto& b) {
    return std::tie(a.path, a.code, a.message) < std::tie(b.path, b.code, b.message);
  });
}

void ValidationReport::promote_warnings() {
  for (auto& item : items) item.severity = Severity::error;
}

namespace {

std::string idx(std::string_view base, std::size_t i) {
  return std::string(base) + "[" + std::to_string(i) + "]";
}

std::optional<long long> as_integer(std::string_view s) {
  if (s.empty() || s.size() > 18) return std::nullopt;
  long long v = 0;
  for (char c : s) {
    if (c < '0' || c > '9') return std::nullopt;
    v = v * 10 + (c - '0');
  }
  return v;
}

class Checker {
 public:
  Checker(const WorkRecord& record, const NamespaceTable& ns) : r_(record), ns_(ns) {
    for (const auto& w : r_.witnesses) witness_ids_.insert(w.local_id);
  }

  ValidationReport run() {
    check_identity();
    check_ids();
    for (std::size_t i = 0; i < r_.authors.size(); ++i) check_author(r_.authors[i], idx("authors", i));
    check_titles();
    if (r_.text_lang) {
      lang("text_lang.main", r_.text_lang->main);
      sources("text_lang.sources", r_.text_lang->sources);
    }
    for (std::size_t i = 0; i < r_.notes.size(); ++i) check_note(r_.notes[i], idx("notes", i));
    for (std::size_t i = 0; i < r_.witnesses.size(); ++i) check_witness(r_.witnesses[i], idx("witnesses", i));
    for (std::size_t i = 0; i < r_.relations.size(); ++i) check_relation(r_.relations[i], idx("relations", i));
    report_.sort();
    return std::move(report_);
  }

 private:
  void error(std::string code, std::string path, std::string message) {
    report_.add(Severity::error, std::move(code), std::move(path), std::move(message));
  }
  void warning(std::string code, std::string path, std::string message) {
    report_.add(Severity::warning, std::move(code), std::move(path), std::move(message));
  }

  void lang(const std::string& path, const std::string& tag) {
    if (tag.empty()) return;
    if (is_syc(tag))
      warning("LANG_SYC", path, "language tag '" + tag + "' uses Classical Syriac; use the macrolanguage 'syr'");
  }

  void sources(const std::string& path, const std::vector<LocalPointer>& ptrs) {
    for (std::size_t i = 0; i < ptrs.size(); ++i)
      if (!witness_ids_.contains(ptrs[i].target_id))
        error("PTR_UNRESOLVED", idx(path, i), "source '#" + ptrs[i].target_id + "' is not a witness in this record");
  }

  void check_identity() {
    std::vector<std::size_t> uri_idnos;
    for (std::size_t i = 0; i < r_.idnos.size(); ++i)
      if (r_.idnos[i].scheme == "URI") uri_idnos.push_back(i);
    if (uri_idnos.empty()) {
      error("MODEL_NO_URI", "idnos", "no idno with scheme URI");
    } else if (uri_idnos.size() > 1) {
      error("URI_DUP", "idnos", std::to_string(uri_idnos.size()) + " idnos with scheme URI");
    } else {
      const auto& value = r_.idnos[uri_idnos.front()].value;
      auto uri = EntityUri::try_parse(value);
      auto path = idx("idnos", uri_idnos.front());
      if (!uri || uri->kind != EntityKind::work || uri->fragment)
        error("URI_NOT_WORK", path, "'" + value + "' is not a work URI");
      else if (*uri != r_.uri)
        error("URI_MISMATCH", path, "idno '" + value + "' disagrees with record URI " + r_.uri.render());
    }
    if (r_.uri.kind != EntityKind::work || r_.uri.fragment)
      error("URI_NOT_WORK", "uri", r_.uri.render() + " is not a work URI");
    for (std::size_t i = 0; i < r_.idnos.size(); ++i)
      if (r_.idnos[i].scheme.empty() || r_.idnos[i].value.empty())
        error("IDNO_EMPTY", idx("idnos", i), "idno needs a scheme and a value");
  }

  void check_ids() {
    std::map<std::string, int> seen;
    for (const auto& t : r_.titles)
      if (!t.local_id.empty()) ++seen[t.local_id];
    for (const auto& w : r_.witnesses) ++seen[w.local_id];
    for (const auto& rel : r_.relations)
      if (rel.local_id) ++seen[*rel.local_id];
    for (const auto& [id, n] : seen)
      if (n > 1) error("ID_DUP", "ids", "xml:id '" + id + "' used " + std::to_string(n) + " times");
    for (std::size_t i = 0; i < r_.witnesses.size(); ++i)
      if (r_.witnesses[i].local_id.empty())
        error("WIT_NO_ID", idx("witnesses", i), "witness without xml:id");
  }

  void check_author(const AuthorRef& a, const std::string& path) {
    if (a.person && a.person->kind != EntityKind::person)
      error("AUTHOR_NOT_PERSON", path, a.person->render() + " is not a person URI");
    sources(path + ".sources", a.sources);
  }

  void check_titles() {
    std::map<std::string, std::vector<std::size_t>> headwords;
    for (std::size_t i = 0; i < r_.titles.size(); ++i) {
      const auto& t = r_.titles[i];
      auto path = idx("titles", i);
      if (t.lang.empty()) error("TITLE_NO_LANG", path, "title without xml:lang");
      lang(path + ".lang", t.lang);
      for (const auto& span : t.text.spans)
        if (span.lang) lang(path + ".text", *span.lang);
      if (t.text.empty()) error("TITLE_EMPTY", path, "title text is empty");
      sources(path + ".sources", t.sources);
      for (const auto& tag : t.tags)
        if (tag != kHeadwordTag && tag != kAnglicizedTag)
          warning("TAG_UNKNOWN", path + ".tags", "unrecognized syriaca-tags value '" + tag + "'");
      if (t.is_headword()) headwords[t.lang].push_back(i);
    }
    for (const auto& [l, which] : headwords)
      if (which.size() > 1)
        error("HEADWORD_DUP", "titles",
              std::to_string(which.size()) + " headword titles for language '" + l + "'");
  }

  void check_note(const NotePart& n, const std::string& path) {
    if (note_requires_quote(n.type) && !n.quoted)
      error("NOTE_UNQUOTED", path, std::string(to_string(n.type)) + " note must quote its excerpt");
    if (n.segments.empty()) error("NOTE_EMPTY", path, "note has no text");
    for (std::size_t i = 0; i < n.segments.size(); ++i) {
      const auto& seg = n.segments[i];
      auto spath = idx(path + ".segments", i);
      if (n.segments.size() > 1 && (!seg.lang || seg.lang->empty()))
        error("SEG_NO_LANG", spath, "multilingual note segment without xml:lang");
      if (seg.lang) lang(spath, *seg.lang);
      if (normalize_space(seg.text).empty()) error("NOTE_EMPTY", spath, "empty note segment");
    }
    sources(path + ".sources", n.sources);
  }

  void range(const std::string& path, std::string_view from, std::string_view to) {
    auto f = as_integer(from);
    auto t = as_integer(to);
    if (f && t && *f > *t)
      error("RANGE_REVERSED", path, "range " + std::string(from) + "-" + std::string(to) + " is reversed");
  }

  void check_witness(const BiblWitness& w, const std::string& path) {
    if (w.witness_class.empty()) error("WIT_NO_CLASS", path, "witness without type");
    for (std::size_t i = 0; i < w.cited_ranges.size(); ++i)
      range(idx(path + ".cited_ranges", i), w.cited_ranges[i].from, w.cited_ranges[i].to);
    if (w.locus) range(path + ".locus", w.locus->from, w.locus->to);
    if (w.is_manuscript()) {
      if (!w.locus) error("MS_NO_LOCUS", path, "manuscript witness '" + w.local_id + "' has no locus");
      if (w.ms_identifier->uri.kind != EntityKind::manuscript)
        error("WIT_PTR_KIND", path + ".ms_identifier", "msIdentifier URI is not a manuscript URI");
    } else if (w.cited_ranges.empty()) {
      error("WIT_NO_RANGE", path, "publication witness '" + w.local_id + "' has no citedRange");
    }
    if (w.record_ptr && w.record_ptr->kind != EntityKind::bibl && w.record_ptr->kind != EntityKind::manuscript)
      error("WIT_PTR_KIND", path + ".record_ptr", w.record_ptr->render() + " is not a bibl or manuscript URI");
    if (w.title) lang(path + ".title", w.title->lang);
    if (w.text_lang) lang(path + ".text_lang", *w.text_lang);
    if (w.ms_identifier && w.ms_identifier->collection_lang)
      lang(path + ".ms_identifier.collection", *w.ms_identifier->collection_lang);
  }

  void reference(const std::string& path, const Reference& ref) {
    if (ref.is_local()) {
      if (!witness_ids_.contains(std::string(ref.local_id())))
        error("PTR_UNRESOLVED", path, "'" + ref.value + "' is not a witness in this record");
      return;
    }
    if (!is_absolute_iri(ref.value)) {
      error("REF_INVALID", path, "'" + ref.value + "' is neither a local pointer nor an absolute IRI");
      return;
    }
    if (ref.value.starts_with(kUriAuthority)) {
      try {
        (void)uri_kind(ref.value);
      } catch (const Error&) {
        error("REF_INVALID", path, "malformed entity URI '" + ref.value + "'");
      }
    }
  }

  void check_relation(const RelationTriple& rel, const std::string& path) {
    auto curie = split_curie(rel.predicate);
    if (!curie) error("CURIE_INVALID", path + ".predicate", "'" + rel.predicate + "' is not a CURIE");
    else if (!ns_.lookup(curie->first))
      error("PREFIX_UNBOUND", path + ".predicate", "prefix '" + std::string(curie->first) + "' is not bound");
    if (rel.subjects.empty()) error("REL_EMPTY", path + ".subjects", "relation without active");
    if (rel.objects.empty()) error("REL_EMPTY", path + ".objects", "relation without passive");
    for (std::size_t i = 0; i < rel.subjects.size(); ++i) reference(idx(path + ".subjects", i), rel.subjects[i]);
    for (std::size_t i = 0; i < rel.objects.size(); ++i) reference(idx(path + ".objects", i), rel.objects[i]);
    sources(path + ".sources", rel.sources);
  }

  const WorkRecord& r_;
  const NamespaceTable& ns_;
  std::set<std::string> witness_ids_;
  ValidationReport report_;
};

}  // namespace

ValidationReport validate_record(const WorkRecord& record, const NamespaceTable& ns) {
  return Checker(record, ns).run();
}

}  // namespace workauth
