#include "workauth/rdf.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <map>
#include <set>

#include "workauth/error.hpp"
#include "workauth/tei.hpp"

namespace workauth::rdf {

namespace {

std::string iri_component(std::string_view text) {
  std::string out;
  for (unsigned char c : text) {
    if (std::isalnum(c) || c == '-' || c == '_' || c == '.' || c == '~' || c >= 0x80) {
      out += static_cast<char>(c);
    } else {
      char buf[4];
      std::snprintf(buf, sizeof buf, "%%%02X", c);
      out += buf;
    }
  }
  return out;
}

Triple literal_triple(std::string s, std::string p, std::string text, std::optional<std::string> lang) {
  if (lang && lang->empty()) lang.reset();
  return Triple{std::move(s), std::move(p), Literal{std::move(text), std::move(lang)}};
}

}  // namespace

std::string resolve_reference(const WorkRecord& record, const Reference& ref) {
  if (ref.is_local()) {
    auto id = ref.local_id();
    if (!record.find_witness(id))
      throw Error("POINTER_UNRESOLVED", "'" + ref.value + "' does not resolve to a witness of " + record.uri.render());
    return resolve_pointer(record.uri, ref.value);
  }
  if (!is_absolute_iri(ref.value))
    throw Error("POINTER_UNRESOLVED", "'" + ref.value + "' is not an absolute IRI");
  return ref.value;
}

std::vector<Triple> relations_to_triples(const WorkRecord& record, const NamespaceTable& ns) {
  std::vector<Triple> out;
  for (const auto& rel : record.relations) {
    auto predicate = expand_curie(rel.predicate, ns);
    std::vector<std::string> objects;
    objects.reserve(rel.objects.size());
    for (const auto& o : rel.objects) objects.push_back(resolve_reference(record, o));
    for (const auto& s : rel.subjects) {
      auto subject = resolve_reference(record, s);
      for (const auto& o : objects) out.push_back(Triple{subject, predicate, Iri{o}});
    }
  }
  return out;
}

std::vector<Triple> record_to_triples(const WorkRecord& record, const NamespaceTable& ns) {
  const auto work = record.uri.render();
  const auto title = expand_curie("dct:title", ns);
  const auto headword = expand_curie("syriaca:headword", ns);
  std::vector<Triple> out;
  out.push_back({work, expand_curie("rdf:type", ns), Iri{expand_curie(kConceptualWork, ns)}});
  for (const auto& t : record.titles) out.push_back(literal_triple(work, title, t.text.str(), t.lang));
  for (const auto& a : record.authors)
    if (a.person) out.push_back({work, expand_curie("dct:creator", ns), Iri{a.person->render()}});
  for (const auto& t : record.titles)
    if (t.is_headword()) out.push_back(literal_triple(work, headword, t.text.str(), t.lang));
  for (const auto& i : record.idnos)
    if (i.scheme != "URI")
      out.push_back(literal_triple(work, expand_curie("syriaca:idno-" + iri_component(i.scheme), ns), i.value,
                                   std::nullopt));
  auto rels = relations_to_triples(record, ns);
  out.insert(out.end(), rels.begin(), rels.end());
  return out;
}

std::string escape_literal(std::string_view text) {
  std::string out;
  out.reserve(text.size() + 2);
  for (unsigned char c : text) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\r': out += "\\r"; break;
      case '\t': out += "\\t"; break;
      case '\b': out += "\\b"; break;
      case '\f': out += "\\f"; break;
      default:
        if (c < 0x20 || c == 0x7f) {
          char buf[8];
          std::snprintf(buf, sizeof buf, "\\u%04X", c);
          out += buf;
        } else {
          out += static_cast<char>(c);
        }
    }
  }
  return out;
}

namespace {

std::string iri_ref(std::string_view iri) {
  std::string out = "<";
  for (unsigned char c : iri) {
    if (c <= 0x20 || c == '<' || c == '>' || c == '"' || c == '{' || c == '}' || c == '|' || c == '^' ||
        c == '`' || c == '\\') {
      char buf[8];
      std::snprintf(buf, sizeof buf, "\\u%04X", c);
      out += buf;
    } else {
      out += static_cast<char>(c);
    }
  }
  out += '>';
  return out;
}

std::string literal_term(const Literal& l) {
  std::string out = "\"" + escape_literal(l.lexical) + "\"";
  if (l.lang) out += "@" + *l.lang;
  return out;
}

bool pn_local_ok(std::string_view local) {
  if (local.empty()) return true;
  if (local.front() == '-' || local.front() == '.' || local.back() == '.') return false;
  return std::all_of(local.begin(), local.end(), [](char c) {
    auto u = static_cast<unsigned char>(c);
    return std::isalnum(u) || c == '_' || c == '-';
  });
}

/// Longest matching namespace base whose remainder is a plain local name.
std::string turtle_iri(std::string_view iri, const NamespaceTable& ns) {
  std::string best;
  std::size_t best_len = 0;
  for (const auto& [prefix, base] : ns.bindings()) {
    if (base.size() > best_len && iri.starts_with(base) && pn_local_ok(iri.substr(base.size()))) {
      best = prefix + ":" + std::string(iri.substr(base.size()));
      best_len = base.size();
    }
  }
  return best_len ? best : iri_ref(iri);
}

std::string turtle_object(const Object& o, const NamespaceTable& ns) {
  if (auto iri = std::get_if<Iri>(&o)) return turtle_iri(iri->value, ns);
  return literal_term(std::get<Literal>(o));
}

}  // namespace

std::string serialize_graph(const std::vector<Triple>& triples, GraphFormat format, const NamespaceTable& ns) {
  std::string out;
  if (format == GraphFormat::ntriples) {
    for (const auto& t : triples) {
      out += iri_ref(t.subject) + " " + iri_ref(t.predicate) + " ";
      if (auto iri = std::get_if<Iri>(&t.object)) out += iri_ref(iri->value);
      else out += literal_term(std::get<Literal>(t.object));
      out += " .\n";
    }
    return out;
  }

  for (const auto& [prefix, base] : ns.bindings()) out += "@prefix " + prefix + ": " + iri_ref(base) + " .\n";
  if (triples.empty()) return out;
  out += "\n";

  // Subjects in order of first appearance; statements keep input order.
  std::vector<std::string> subjects;
  std::map<std::string, std::vector<const Triple*>> by_subject;
  for (const auto& t : triples) {
    auto [it, inserted] = by_subject.try_emplace(t.subject);
    if (inserted) subjects.push_back(t.subject);
    it->second.push_back(&t);
  }
  for (const auto& s : subjects) {
    const auto& group = by_subject[s];
    out += turtle_iri(s, ns);
    for (std::size_t i = 0; i < group.size(); ++i) {
      out += i == 0 ? " " : " ;\n    ";
      out += turtle_iri(group[i]->predicate, ns) + " " + turtle_object(group[i]->object, ns);
    }
    out += " .\n";
  }
  return out;
}

namespace {

/// Witness ids referenced anywhere in the record except by relation skip.
std::set<std::string> referenced_ids(const WorkRecord& r, const RelationTriple* skip) {
  std::set<std::string> ids;
  auto add_ptrs = [&](const std::vector<LocalPointer>& ptrs) {
    for (const auto& p : ptrs) ids.insert(p.target_id);
  };
  for (const auto& a : r.authors) add_ptrs(a.sources);
  for (const auto& t : r.titles) add_ptrs(t.sources);
  if (r.text_lang) add_ptrs(r.text_lang->sources);
  for (const auto& n : r.notes) add_ptrs(n.sources);
  for (const auto& rel : r.relations) {
    if (&rel == skip) continue;
    add_ptrs(rel.sources);
    for (const auto& ref : rel.subjects)
      if (ref.is_local()) ids.insert(std::string(ref.local_id()));
    for (const auto& ref : rel.objects)
      if (ref.is_local()) ids.insert(std::string(ref.local_id()));
  }
  return ids;
}

}  // namespace

Expansion expand_embodied_relation(const WorkRecord& record, std::string_view relation_id, const EntityUri& new_uri,
                                   const std::function<bool(const EntityUri&)>& is_taken) {
  auto it = std::find_if(record.relations.begin(), record.relations.end(),
                         [&](const RelationTriple& r) { return r.local_id && *r.local_id == relation_id; });
  if (it == record.relations.end())
    throw Error("NOT_FOUND", "no relation with xml:id '" + std::string(relation_id) + "'");
  const RelationTriple& embodied = *it;

  std::string_view replacement;
  if (embodied.predicate == kHasEmbodiedVersion) replacement = kHasVersion;
  else if (embodied.predicate == kHasEmbodiedRecension) replacement = kHasRecension;
  else
    throw Error("NOT_EMBODIED", "relation '" + std::string(relation_id) + "' has predicate " + embodied.predicate +
                                    ", expected " + std::string(kHasEmbodiedVersion) + " or " +
                                    std::string(kHasEmbodiedRecension));
  if (new_uri.kind != EntityKind::work || new_uri.fragment)
    throw Error("URI_INVALID", new_uri.render() + " is not a work URI");
  if (new_uri == record.uri || (is_taken && is_taken(new_uri)))
    throw Error("URI_COLLISION", new_uri.render() + " is already in use");

  Expansion out;
  out.created.uri = new_uri;
  out.created.idnos.push_back({"URI", new_uri.render()});

  // Witnesses named by the relation move to the new work; any still used
  // elsewhere in the original are copied instead. Source witnesses are copied.
  std::set<std::string> moved;
  for (const auto& ref : embodied.objects)
    if (ref.is_local()) moved.insert(std::string(ref.local_id()));
  std::set<std::string> copied;
  for (const auto& p : embodied.sources) copied.insert(p.target_id);
  auto still_used = referenced_ids(record, &embodied);
  still_used.insert(copied.begin(), copied.end());

  for (const auto& w : record.witnesses)
    if (moved.contains(w.local_id) || copied.contains(w.local_id)) out.created.witnesses.push_back(w);

  RelationTriple embodies;
  embodies.local_id = embodied.local_id;
  embodies.rel_type = embodied.rel_type;
  embodies.subjects = embodied.objects;
  embodies.predicate = std::string(kEmbodies);
  embodies.objects = {Reference{new_uri.render()}};
  embodies.sources = embodied.sources;
  out.created.relations.push_back(std::move(embodies));

  out.updated = record;
  for (auto& rel : out.updated.relations) {
    if (rel.local_id && *rel.local_id == relation_id) {
      rel.predicate = std::string(replacement);
      rel.objects = {Reference{new_uri.render()}};
    }
  }
  std::erase_if(out.updated.witnesses, [&](const BiblWitness& w) {
    return moved.contains(w.local_id) && !still_used.contains(w.local_id);
  });
  return out;
}

}  // namespace workauth::rdf
