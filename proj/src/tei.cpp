#include "workauth/tei.hpp"

#include <algorithm>
#include <charconv>

#include "workauth/error.hpp"
#include "workauth/xml.hpp"

namespace workauth {

namespace {

using xml::Element;
using Attrs = xml::Writer::Attrs;

[[noreturn]] void invalid(const Element& at, const std::string& message) {
  throw Error("MODEL_INVALID", "line " + std::to_string(at.line) + ": " + message);
}

std::string attr_or(const Element& e, std::string_view key, std::string fallback = {}) {
  if (auto v = e.attr(key)) return *v;
  return fallback;
}

std::optional<std::string> opt_attr(const Element& e, std::string_view key) {
  if (auto v = e.attr(key)) return *v;
  return std::nullopt;
}

/// Attributes of e not listed in known, sorted by name.
ExtraAttributes extras(const Element& e, std::initializer_list<std::string_view> known) {
  ExtraAttributes out;
  for (const auto& [k, v] : e.attrs)
    if (std::find(known.begin(), known.end(), k) == known.end()) out.emplace_back(k, v);
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<LocalPointer> pointers(const Element& e, std::string_view key) {
  std::vector<LocalPointer> out;
  if (auto v = e.attr(key)) {
    for (const auto& token : split_tokens(*v)) {
      try {
        out.push_back(LocalPointer::parse(token));
      } catch (const Error& err) {
        invalid(e, err.what());
      }
    }
  }
  return out;
}

std::vector<Reference> references(const Element& e, std::string_view key) {
  std::vector<Reference> out;
  if (auto v = e.attr(key))
    for (auto& token : split_tokens(*v)) out.push_back(Reference{std::move(token)});
  return out;
}

EntityUri entity_uri(const Element& at, std::string_view text) {
  auto uri = EntityUri::try_parse(text);
  if (!uri) invalid(at, "'" + std::string(text) + "' is not an entity URI");
  return *uri;
}

std::string text_of(const Element& e) { return normalize_space(e.text()); }

Element opaque(const Element& e) {
  Element copy = e;
  xml::strip_whitespace_nodes(copy);
  return copy;
}

/// Mixed content with <foreign xml:lang> spans. Whitespace runs collapse;
/// the ends of the whole text are trimmed.
InlineText inline_text(const Element& e) {
  std::vector<TextSpan> raw;
  auto push_plain = [&](const std::string& text) {
    if (!raw.empty() && !raw.back().lang) raw.back().text += text;
    else raw.push_back({std::nullopt, text});
  };
  for (const auto& child : e.children) {
    if (auto t = child.text()) {
      push_plain(*t);
    } else if (auto el = child.element(); el->name == "foreign") {
      raw.push_back({opt_attr(*el, "xml:lang"), el->text()});
    } else {
      push_plain(el->text());
    }
  }
  InlineText out;
  for (auto& span : raw) {
    std::string collapsed;
    bool space = false;
    for (char c : span.text) {
      if (c == ' ' || c == '\t' || c == '\n' || c == '\r') {
        space = true;
        continue;
      }
      if (space) collapsed += ' ';
      space = false;
      collapsed += c;
    }
    if (space) collapsed += ' ';
    span.text = std::move(collapsed);
  }
  if (!raw.empty()) {
    auto& first = raw.front().text;
    if (!first.empty() && first.front() == ' ') first.erase(0, 1);
    auto& last = raw.back().text;
    if (!last.empty() && last.back() == ' ') last.pop_back();
  }
  for (auto& span : raw)
    if (!span.text.empty()) out.spans.push_back(std::move(span));
  return out;
}

std::vector<NamePart> name_parts(const Element& e) {
  std::vector<NamePart> out;
  for (const auto* part : e.child_elements()) {
    ExtraAttributes attrs(part->attrs.begin(), part->attrs.end());
    std::sort(attrs.begin(), attrs.end());
    out.push_back({part->name, text_of(*part), std::move(attrs)});
  }
  return out;
}

AuthorRef parse_author(const Element& e) {
  AuthorRef a;
  if (auto ref = e.attr("ref")) {
    auto uri = EntityUri::try_parse(*ref);
    if (!uri) invalid(e, "author ref '" + *ref + "' is not an entity URI");
    a.person = *uri;
  }
  a.sources = pointers(e, "source");
  a.name = name_parts(e);
  if (a.name.empty()) a.display = text_of(e);
  a.extra = extras(e, {"ref", "source"});
  return a;
}

TitleEntry parse_title(const Element& e) {
  TitleEntry t;
  t.local_id = attr_or(e, "xml:id");
  t.lang = attr_or(e, "xml:lang");
  t.sources = pointers(e, "source");
  if (auto tags = e.attr("syriaca-tags")) t.tags = split_tokens(*tags);
  t.text = inline_text(e);
  t.extra = extras(e, {"xml:id", "xml:lang", "source", "syriaca-tags"});
  return t;
}

std::optional<NotePart> parse_note(const Element& e) {
  auto type = e.attr("type") ? note_type_from_string(*e.attr("type")) : std::nullopt;
  if (!type) return std::nullopt;
  NotePart n;
  n.type = *type;
  n.sources = pointers(e, "source");
  n.extra = extras(e, {"type", "source", "xml:lang"});
  auto note_lang = opt_attr(e, "xml:lang");
  auto segs = e.children_named("seg");
  auto quotes = e.children_named("quote");
  if (!segs.empty()) {
    for (const auto* seg : segs) {
      NoteSegment s{opt_attr(*seg, "xml:lang"), {}};
      if (auto q = seg->first_child("quote")) {
        n.quoted = true;
        if (!s.lang) s.lang = opt_attr(*q, "xml:lang");
      }
      s.text = text_of(*seg);
      n.segments.push_back(std::move(s));
    }
  } else if (!quotes.empty()) {
    n.quoted = true;
    for (const auto* q : quotes) {
      auto lang = opt_attr(*q, "xml:lang");
      n.segments.push_back({lang ? lang : note_lang, text_of(*q)});
    }
  } else {
    n.segments.push_back({note_lang, text_of(e)});
  }
  return n;
}

MsIdentifier parse_ms_identifier(const Element& e) {
  MsIdentifier ms;
  bool have_uri = false;
  for (const auto* child : e.child_elements()) {
    if (child->name == "country") ms.country = text_of(*child);
    else if (child->name == "settlement") ms.settlement = text_of(*child);
    else if (child->name == "collection") {
      ms.collection = text_of(*child);
      ms.collection_lang = opt_attr(*child, "xml:lang");
    } else if (child->name == "idno" && attr_or(*child, "type") == "URI") {
      ms.uri = entity_uri(*child, text_of(*child));
      have_uri = true;
    } else if (child->name == "altIdentifier") {
      for (const auto* idno : child->children_named("idno"))
        ms.alt_idnos.push_back({attr_or(*idno, "type"), text_of(*idno)});
    }
  }
  if (!have_uri) invalid(e, "msIdentifier without a URI idno");
  return ms;
}

BiblWitness parse_witness(const Element& e) {
  BiblWitness w;
  w.local_id = attr_or(e, "xml:id");
  w.witness_class = attr_or(e, "type");
  w.extra = extras(e, {"type", "xml:id"});
  for (const auto* child : e.child_elements()) {
    const auto& name = child->name;
    if (name == "author" || name == "editor") {
      Creator c{name, name_parts(*child)};
      if (c.name.empty()) c.name.push_back({"name", text_of(*child), {}});
      w.creators.push_back(std::move(c));
    } else if (name == "title" && !w.title) {
      w.title = WitnessTitle{opt_attr(*child, "level"), attr_or(*child, "xml:lang"), text_of(*child)};
    } else if (name == "ptr" && child->attr("target") && !w.record_ptr) {
      w.record_ptr = entity_uri(*child, *child->attr("target"));
    } else if (name == "citedRange") {
      w.cited_ranges.push_back(
          {attr_or(*child, "unit"), attr_or(*child, "from"), attr_or(*child, "to"), text_of(*child)});
    } else if (name == "msIdentifier" && !w.ms_identifier) {
      w.ms_identifier = parse_ms_identifier(*child);
    } else if (name == "biblScope" && child->first_child("locus") && !w.locus) {
      const auto* locus = child->first_child("locus");
      Locus l{attr_or(*locus, "from"), attr_or(*locus, "to"), text_of(*locus), std::nullopt};
      for (const auto* idno : child->children_named("idno"))
        if (attr_or(*idno, "type") == "URI") l.part_uri = entity_uri(*idno, text_of(*idno));
      w.locus = std::move(l);
    } else if (name == "textLang" && child->attr("mainLang") && !w.text_lang) {
      w.text_lang = *child->attr("mainLang");
    } else {
      w.extensions.push_back(opaque(*child));
    }
  }
  return w;
}

RelationTriple parse_relation(const Element& e) {
  RelationTriple r;
  r.local_id = opt_attr(e, "xml:id");
  r.rel_type = opt_attr(e, "type");
  r.subjects = references(e, "active");
  r.predicate = attr_or(e, "ref");
  r.objects = references(e, "passive");
  r.sources = pointers(e, "source");
  r.extra = extras(e, {"xml:id", "type", "active", "ref", "passive", "source"});
  return r;
}

void parse_header(const Element& header, WorkRecord& record) {
  if (auto fd = header.first_child("fileDesc"))
    if (auto ts = fd->first_child("titleStmt"))
      for (const auto* ed : ts->children_named("editor")) record.editors.push_back(text_of(*ed));
  if (auto rd = header.first_child("revisionDesc"))
    for (const auto* ch : rd->children_named("change"))
      record.change_log.push_back({attr_or(*ch, "who"), attr_or(*ch, "when"), text_of(*ch)});
}

std::optional<std::uint64_t> work_id_from_xml_id(std::string_view id) {
  if (!id.starts_with("work-")) return std::nullopt;
  id.remove_prefix(5);
  if (id.empty() || !std::all_of(id.begin(), id.end(), [](char c) { return c >= '0' && c <= '9'; }))
    return std::nullopt;
  std::uint64_t v = 0;
  auto [ptr, ec] = std::from_chars(id.data(), id.data() + id.size(), v);
  if (ec != std::errc() || ptr != id.data() + id.size()) return std::nullopt;
  return v;
}

// ---------------------------------------------------------------- writing

void sort_extras(Attrs& attrs, const ExtraAttributes& extra) {
  ExtraAttributes sorted = extra;
  std::sort(sorted.begin(), sorted.end());
  attrs.insert(attrs.end(), sorted.begin(), sorted.end());
}

std::string join_pointers(const std::vector<LocalPointer>& ptrs) {
  std::string out;
  for (const auto& p : ptrs) {
    if (!out.empty()) out += ' ';
    out += p.render();
  }
  return out;
}

std::string join_refs(const std::vector<Reference>& refs) {
  std::string out;
  for (const auto& r : refs) {
    if (!out.empty()) out += ' ';
    out += r.value;
  }
  return out;
}

void add_sources(Attrs& attrs, const std::vector<LocalPointer>& sources) {
  if (!sources.empty()) attrs.emplace_back("source", join_pointers(sources));
}

void write_name_parts(xml::Writer& w, const std::vector<NamePart>& parts) {
  for (const auto& part : parts) {
    Attrs attrs;
    sort_extras(attrs, part.attrs);
    w.leaf(part.element, attrs, part.text);
  }
}

void write_author(xml::Writer& w, const AuthorRef& a) {
  Attrs attrs;
  if (a.person) attrs.emplace_back("ref", a.person->render());
  add_sources(attrs, a.sources);
  sort_extras(attrs, a.extra);
  if (a.name.empty()) {
    w.leaf("author", attrs, a.display);
    return;
  }
  w.open("author", attrs);
  write_name_parts(w, a.name);
  w.close();
}

void write_title(xml::Writer& w, const TitleEntry& t) {
  Attrs attrs;
  if (!t.local_id.empty()) attrs.emplace_back("xml:id", t.local_id);
  attrs.emplace_back("xml:lang", t.lang);
  add_sources(attrs, t.sources);
  if (!t.tags.empty()) {
    std::string tags;
    for (const auto& tag : t.tags) tags += (tags.empty() ? "" : " ") + tag;
    attrs.emplace_back("syriaca-tags", tags);
  }
  sort_extras(attrs, t.extra);
  std::string line = xml::Writer::start_tag("title", attrs, false);
  for (const auto& span : t.text.spans) {
    if (span.lang) {
      line += xml::Writer::start_tag("foreign", {{"xml:lang", *span.lang}}, false);
      line += xml::escape_text(span.text) + "</foreign>";
    } else {
      line += xml::escape_text(span.text);
    }
  }
  line += "</title>";
  w.raw_line(line);
}

void write_note(xml::Writer& w, const NotePart& n) {
  Attrs attrs{{"type", std::string(to_string(n.type))}};
  bool single = n.segments.size() == 1;
  if (single && !n.quoted && n.segments.front().lang) attrs.emplace_back("xml:lang", *n.segments.front().lang);
  add_sources(attrs, n.sources);
  sort_extras(attrs, n.extra);
  auto quote = [](const NoteSegment& seg, bool with_lang) {
    Attrs qa;
    if (with_lang && seg.lang) qa.emplace_back("xml:lang", *seg.lang);
    return xml::Writer::start_tag("quote", qa, false) + xml::escape_text(seg.text) + "</quote>";
  };
  if (single) {
    const auto& seg = n.segments.front();
    if (n.quoted) {
      w.raw_line(xml::Writer::start_tag("note", attrs, false) + quote(seg, true) + "</note>");
    } else {
      w.leaf("note", attrs, seg.text);
    }
    return;
  }
  w.open("note", attrs);
  for (const auto& seg : n.segments) {
    Attrs sa;
    if (seg.lang) sa.emplace_back("xml:lang", *seg.lang);
    if (n.quoted) w.raw_line(xml::Writer::start_tag("seg", sa, false) + quote(seg, false) + "</seg>");
    else w.leaf("seg", sa, seg.text);
  }
  w.close();
}

void write_witness(xml::Writer& w, const BiblWitness& b) {
  Attrs attrs{{"type", b.witness_class}, {"xml:id", b.local_id}};
  sort_extras(attrs, b.extra);
  w.open("bibl", attrs);
  for (const auto& c : b.creators) {
    w.open(c.role);
    write_name_parts(w, c.name);
    w.close();
  }
  if (b.title) {
    Attrs ta;
    if (b.title->level) ta.emplace_back("level", *b.title->level);
    ta.emplace_back("xml:lang", b.title->lang);
    w.leaf("title", ta, b.title->text);
  }
  if (b.record_ptr) w.empty("ptr", {{"target", b.record_ptr->render()}});
  for (const auto& r : b.cited_ranges) {
    Attrs ra{{"unit", r.unit}};
    if (!r.from.empty()) ra.emplace_back("from", r.from);
    if (!r.to.empty()) ra.emplace_back("to", r.to);
    w.leaf("citedRange", ra, r.display);
  }
  if (b.ms_identifier) {
    const auto& ms = *b.ms_identifier;
    w.open("msIdentifier");
    if (!ms.country.empty()) w.leaf("country", {}, ms.country);
    if (!ms.settlement.empty()) w.leaf("settlement", {}, ms.settlement);
    if (!ms.collection.empty() || ms.collection_lang) {
      Attrs ca;
      if (ms.collection_lang) ca.emplace_back("xml:lang", *ms.collection_lang);
      w.leaf("collection", ca, ms.collection);
    }
    w.leaf("idno", {{"type", "URI"}}, ms.uri.render());
    for (const auto& alt : ms.alt_idnos) {
      w.open("altIdentifier");
      w.leaf("idno", {{"type", alt.scheme}}, alt.value);
      w.close();
    }
    w.close();
  }
  if (b.locus) {
    w.open("biblScope");
    Attrs la;
    if (!b.locus->from.empty()) la.emplace_back("from", b.locus->from);
    if (!b.locus->to.empty()) la.emplace_back("to", b.locus->to);
    w.leaf("locus", la, b.locus->display);
    if (b.locus->part_uri) w.leaf("idno", {{"type", "URI"}}, b.locus->part_uri->render());
    w.close();
  }
  if (b.text_lang) w.empty("textLang", {{"mainLang", *b.text_lang}});
  for (const auto& ext : b.extensions) w.raw_line(xml::to_string(ext));
  w.close();
}

void write_relation(xml::Writer& w, const RelationTriple& r) {
  Attrs attrs;
  if (r.local_id) attrs.emplace_back("xml:id", *r.local_id);
  if (r.rel_type) attrs.emplace_back("type", *r.rel_type);
  attrs.emplace_back("active", join_refs(r.subjects));
  attrs.emplace_back("ref", r.predicate);
  attrs.emplace_back("passive", join_refs(r.objects));
  add_sources(attrs, r.sources);
  sort_extras(attrs, r.extra);
  w.empty("relation", attrs);
}

}  // namespace

RecordRejected::RecordRejected(ValidationReport report)
    : Error("RECORD_INVALID", "record has " + std::to_string(report.error_count()) + " validation error(s)"),
      report_(std::move(report)) {}

WorkRecord parse_work_record(std::string_view document) {
  Element root = xml::parse(document);
  if (root.name != "TEI") invalid(root, "root element is <" + root.name + ">, expected <TEI>");

  WorkRecord record;
  if (auto header = root.first_child("teiHeader")) parse_header(*header, record);

  const Element* body = nullptr;
  if (auto text = root.first_child("text")) body = text->first_child("body");
  auto bibls = body ? body->children_named("bibl") : std::vector<const Element*>{};
  if (bibls.size() != 1)
    throw Error("MODEL_CARDINALITY",
                "expected exactly one work <bibl> in the body, found " + std::to_string(bibls.size()));
  const Element& work = *bibls.front();

  for (const auto* child : work.child_elements()) {
    const auto& name = child->name;
    if (name == "author") {
      record.authors.push_back(parse_author(*child));
    } else if (name == "title") {
      record.titles.push_back(parse_title(*child));
    } else if (name == "textLang" && !record.text_lang) {
      record.text_lang = TextLang{attr_or(*child, "mainLang"), text_of(*child), pointers(*child, "source")};
    } else if (name == "note") {
      if (auto note = parse_note(*child)) record.notes.push_back(std::move(*note));
      else record.extensions.push_back(opaque(*child));
    } else if (name == "idno") {
      record.idnos.push_back({attr_or(*child, "type"), text_of(*child)});
    } else if (name == "bibl") {
      record.witnesses.push_back(parse_witness(*child));
    } else if (name == "listRelation") {
      for (const auto* rel : child->children_named("relation")) record.relations.push_back(parse_relation(*rel));
    } else if (name == "term" && attr_or(*child, "type") == "subject" && child->attr("key")) {
      record.subjects.push_back(*child->attr("key"));
    } else {
      record.extensions.push_back(opaque(*child));
    }
  }

  auto uri_idno = std::find_if(record.idnos.begin(), record.idnos.end(),
                               [](const IdnoEntry& i) { return i.scheme == "URI"; });
  if (uri_idno == record.idnos.end())
    throw Error("MODEL_NO_URI", "work record declares no <idno type=\"URI\">");
  auto uri = EntityUri::try_parse(uri_idno->value);
  if (!uri || uri->kind != EntityKind::work || uri->fragment)
    throw Error("MODEL_NO_URI", "URI idno '" + uri_idno->value + "' is not a work URI");
  record.uri = *uri;

  auto id = work_id_from_xml_id(attr_or(work, "xml:id"));
  if (!id || *id != record.uri.id)
    throw Error("MODEL_ID_MISMATCH", "work bibl xml:id '" + attr_or(work, "xml:id") +
                                         "' does not match " + record.uri.render());
  return record;
}

std::string serialize_work_record(const WorkRecord& record) {
  auto report = validate_record(record);
  if (!report.valid()) throw RecordRejected(std::move(report));

  xml::Writer w;
  w.open("TEI", {{"xmlns", std::string(kTeiNamespace)}});
  w.open("teiHeader");
  w.open("fileDesc");
  w.open("titleStmt");
  w.leaf("title", {}, record.uri.render());
  for (const auto& ed : record.editors) w.leaf("editor", {}, ed);
  w.close();
  w.open("publicationStmt");
  w.leaf("idno", {{"type", "URI"}}, record.uri.render() + "/tei");
  w.close();
  w.open("sourceDesc");
  w.leaf("p", {}, "Born digital.");
  w.close();
  w.close();
  if (!record.change_log.empty()) {
    w.open("revisionDesc");
    for (const auto& c : record.change_log) w.leaf("change", {{"who", c.who}, {"when", c.when}}, c.what);
    w.close();
  }
  w.close();
  w.open("text");
  w.open("body");
  w.open("bibl", {{"xml:id", "work-" + std::to_string(record.uri.id)}});
  for (const auto& a : record.authors) write_author(w, a);
  for (const auto& t : record.titles) write_title(w, t);
  if (record.text_lang) {
    Attrs attrs{{"mainLang", record.text_lang->main}};
    add_sources(attrs, record.text_lang->sources);
    w.leaf("textLang", attrs, record.text_lang->label);
  }
  for (const auto& n : record.notes) write_note(w, n);
  for (const auto& i : record.idnos) w.leaf("idno", {{"type", i.scheme}}, i.value);
  for (const auto& b : record.witnesses) write_witness(w, b);
  if (!record.relations.empty()) {
    w.open("listRelation");
    for (const auto& r : record.relations) write_relation(w, r);
    w.close();
  }
  for (const auto& s : record.subjects) w.empty("term", {{"type", "subject"}, {"key", s}});
  for (const auto& ext : record.extensions) w.raw_line(xml::to_string(ext));
  w.close();
  w.close();
  w.close();
  w.close();
  return "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n" + w.str();
}

std::string resolve_pointer(const EntityUri& base, const LocalPointer& ptr) {
  if (base.kind != EntityKind::work || base.fragment)
    throw Error("POINTER_BASE", "cannot resolve against " + base.render() + ": base must be a work URI without fragment");
  if (!is_valid_fragment(ptr.target_id))
    throw Error("POINTER_INVALID", "invalid pointer target '" + ptr.target_id + "'");
  return base.render() + "#" + ptr.target_id;
}

std::string resolve_pointer(const EntityUri& base, std::string_view token) {
  if (base.kind != EntityKind::work || base.fragment)
    throw Error("POINTER_BASE", "cannot resolve against " + base.render() + ": base must be a work URI without fragment");
  return resolve_pointer(base, LocalPointer::parse(token));
}

}  // namespace workauth
