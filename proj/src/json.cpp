#include "workauth/json.hpp"

namespace workauth {

using nlohmann::json;

namespace {

json pointers(const std::vector<LocalPointer>& ptrs) {
  json out = json::array();
  for (const auto& p : ptrs) out.push_back(p.render());
  return out;
}

json name_parts(const std::vector<NamePart>& parts) {
  json out = json::array();
  for (const auto& p : parts) out.push_back({{"element", p.element}, {"text", p.text}});
  return out;
}

json witness(const BiblWitness& w) {
  json j{{"id", w.local_id}, {"type", w.witness_class}};
  if (!w.creators.empty()) {
    j["creators"] = json::array();
    for (const auto& c : w.creators) j["creators"].push_back({{"role", c.role}, {"name", name_parts(c.name)}});
  }
  if (w.title) {
    j["title"] = {{"lang", w.title->lang}, {"text", w.title->text}};
    if (w.title->level) j["title"]["level"] = *w.title->level;
  }
  if (w.record_ptr) j["ptr"] = w.record_ptr->render();
  if (!w.cited_ranges.empty()) {
    j["cited_ranges"] = json::array();
    for (const auto& r : w.cited_ranges)
      j["cited_ranges"].push_back({{"unit", r.unit}, {"from", r.from}, {"to", r.to}, {"display", r.display}});
  }
  if (w.ms_identifier) {
    const auto& m = *w.ms_identifier;
    json alt = json::array();
    for (const auto& i : m.alt_idnos) alt.push_back({{"type", i.scheme}, {"value", i.value}});
    j["ms_identifier"] = {{"country", m.country},       {"settlement", m.settlement}, {"collection", m.collection},
                          {"uri", m.uri.render()},       {"alt_idnos", alt}};
  }
  if (w.locus) {
    j["locus"] = {{"from", w.locus->from}, {"to", w.locus->to}, {"display", w.locus->display}};
    if (w.locus->part_uri) j["locus"]["part_uri"] = w.locus->part_uri->render();
  }
  if (w.text_lang) j["text_lang"] = *w.text_lang;
  return j;
}

}  // namespace

json to_json(const WorkRecord& r) {
  json j;
  j["uri"] = r.uri.render();
  j["authors"] = json::array();
  for (const auto& a : r.authors) {
    json aj{{"name", a.display_name()}, {"sources", pointers(a.sources)}};
    if (a.person) aj["person"] = a.person->render();
    if (!a.name.empty()) aj["parts"] = name_parts(a.name);
    j["authors"].push_back(std::move(aj));
  }
  j["titles"] = json::array();
  for (const auto& t : r.titles)
    j["titles"].push_back({{"id", t.local_id},
                           {"lang", t.lang},
                           {"text", t.text.str()},
                           {"headword", t.is_headword()},
                           {"tags", t.tags},
                           {"sources", pointers(t.sources)}});
  if (r.text_lang)
    j["text_lang"] = {{"main", r.text_lang->main}, {"label", r.text_lang->label}, {"sources", pointers(r.text_lang->sources)}};
  j["notes"] = json::array();
  for (const auto& n : r.notes) {
    json segs = json::array();
    for (const auto& s : n.segments) {
      json sj{{"text", s.text}};
      if (s.lang) sj["lang"] = *s.lang;
      segs.push_back(std::move(sj));
    }
    j["notes"].push_back({{"type", std::string(to_string(n.type))},
                          {"quoted", n.quoted},
                          {"segments", segs},
                          {"sources", pointers(n.sources)}});
  }
  j["idnos"] = json::array();
  for (const auto& i : r.idnos) j["idnos"].push_back({{"type", i.scheme}, {"value", i.value}});
  j["witnesses"] = json::array();
  for (const auto& w : r.witnesses) j["witnesses"].push_back(witness(w));
  j["relations"] = json::array();
  for (const auto& rel : r.relations) {
    json rj;
    if (rel.local_id) rj["id"] = *rel.local_id;
    if (rel.rel_type) rj["type"] = *rel.rel_type;
    json s = json::array(), o = json::array();
    for (const auto& x : rel.subjects) s.push_back(x.value);
    for (const auto& x : rel.objects) o.push_back(x.value);
    rj["active"] = s;
    rj["ref"] = rel.predicate;
    rj["passive"] = o;
    rj["sources"] = pointers(rel.sources);
    j["relations"].push_back(std::move(rj));
  }
  j["subjects"] = r.subjects;
  return j;
}

json to_json(const ValidationReport& report) {
  json items = json::array();
  for (const auto& i : report.items)
    items.push_back({{"severity", std::string(to_string(i.severity))},
                     {"code", i.code},
                     {"path", i.path},
                     {"message", i.message}});
  return {{"valid", report.valid()},
          {"errors", report.error_count()},
          {"warnings", report.warning_count()},
          {"items", items}};
}

json to_json(const SubjectNode& node) {
  json j{{"code", node.code}, {"label", node.label}, {"children", node.children}};
  j["parent"] = node.parent ? json(*node.parent) : json(nullptr);
  return j;
}

}  // namespace workauth
