#include "workauth/taxonomy.hpp"

#include <fstream>
#include <sstream>

#include "workauth/error.hpp"

namespace workauth {

namespace {

struct Entry {
  const char* code;
  const char* label;
};

// Top-level entries are numbered; subentries carry a letter suffix.
constexpr Entry kBuiltin[] = {
    {"1", "Bible"},
    {"1.a", "Individual Biblical Books"},
    {"1.b", "Collected Biblical Books"},
    {"1.c", "Lectionaries"},
    {"1.d", "Psalters"},
    {"2", "Works of Theology and Biblical Interpretation/Exposition"},
    {"2.a", "Bible Commentaries"},
    {"2.b", "Poems on Biblical Events"},
    {"2.c", "Bible Vocalization (Masora)"},
    {"2.d", "Scholia"},
    {"2.e", "Questions and Answers"},
    {"2.f", "Other Theological Works"},
    {"3", "Liturgical Works"},
    {"3.a", "Missals"},
    {"3.b", "Daily Offices"},
    {"3.c", "Ecclesiastical Office Books"},
    {"3.d", "Collections of Choral Services, Homilies, and Hymns"},
    {"3.e", "Prayers"},
    {"3.f", "Services for Baptisms, Funerals, and other Life Events"},
    {"4", "Works on Spiritual and Ascetic Disciplines"},
    {"5", "Hagiographical Works"},
    {"5.a", "Martyr Acts"},
    {"5.b", "Lives of Saints and Ascetics"},
    {"5.c", "Poems on Saints and Ascetics"},
    {"5.d", "Other Hagiographical Works"},
    {"6", "Apologetic and Heresiological Works"},
    {"7", "Legal and Ecclesiastical Works"},
    {"7.a", "Accounts and Records of Ecclesiastical Councils"},
    {"7.b", "Ecclesiastical Canons/Works of Canon Law"},
    {"7.c", "Works of Civil Law"},
    {"8", "Histories"},
    {"8.a", "Universal Histories"},
    {"8.b", "Particular Histories"},
    {"9", "Philosophical Works"},
    {"9.a", "Works on Logic"},
    {"9.b", "Works on Ethics"},
    {"10", "Linguistic Works"},
    {"10.a", "Grammatical Works"},
    {"10.b", "Lexicographic Works"},
    {"10.c", "Works on Rhetoric and Poetics"},
    {"11", "Works on the Natural and Therapeutic Sciences"},
    {"11.a", "Works on Medicine"},
    {"11.b", "Works on Agriculture"},
    {"11.c", "Works on Chemistry"},
    {"11.d", "Works on Astronomy, Cosmography, and Geography"},
    {"12", "Works on Mathematics"},
    {"13", "Works on Natural History"},
    {"14", "Popular Narratives"},
};

Taxonomy make_builtin() {
  std::string table;
  for (const auto& e : kBuiltin) {
    std::string code = e.code;
    auto dot = code.find('.');
    table += code + "\t" + (dot == std::string::npos ? "" : code.substr(0, dot)) + "\t" + e.label + "\n";
  }
  return Taxonomy::parse_table(table);
}

}  // namespace

const Taxonomy& Taxonomy::builtin() {
  static const Taxonomy instance = make_builtin();
  return instance;
}

void Taxonomy::add(std::string code, std::optional<std::string> parent, std::string label) {
  if (code.empty()) throw Error("TAXONOMY_INVALID", "empty code");
  if (nodes_.contains(code)) throw Error("TAXONOMY_INVALID", "duplicate code '" + code + "'");
  if (parent) {
    auto it = nodes_.find(*parent);
    if (it == nodes_.end())
      throw Error("TAXONOMY_INVALID", "parent '" + *parent + "' of '" + code + "' is not defined before it");
    if (it->second.parent)
      throw Error("TAXONOMY_INVALID", "'" + code + "' would nest deeper than two levels");
    it->second.children.push_back(code);
  } else {
    roots_.push_back(code);
  }
  order_.push_back(code);
  nodes_.emplace(code, SubjectNode{code, std::move(label), std::move(parent), {}});
}

Taxonomy Taxonomy::parse_table(std::string_view text) {
  Taxonomy t;
  std::istringstream in{std::string(text)};
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    auto tab1 = line.find('\t');
    auto tab2 = tab1 == std::string::npos ? std::string::npos : line.find('\t', tab1 + 1);
    if (tab2 == std::string::npos)
      throw Error("TAXONOMY_INVALID", "line " + std::to_string(lineno) + ": expected code<TAB>parent<TAB>label");
    auto parent = line.substr(tab1 + 1, tab2 - tab1 - 1);
    t.add(line.substr(0, tab1), parent.empty() ? std::nullopt : std::optional(parent), line.substr(tab2 + 1));
  }
  return t;
}

Taxonomy Taxonomy::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("IO_ERROR", "cannot read taxonomy " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_table(buf.str());
}

std::string Taxonomy::to_table() const {
  std::string out = "# code\tparent\tlabel\n";
  for (const auto& code : order_) {
    const auto& n = nodes_.at(code);
    out += n.code + "\t" + n.parent.value_or("") + "\t" + n.label + "\n";
  }
  return out;
}

const SubjectNode& Taxonomy::lookup(std::string_view code) const {
  auto it = nodes_.find(code);
  if (it == nodes_.end()) throw Error("NOT_FOUND", "unknown subject code '" + std::string(code) + "'");
  return it->second;
}

std::vector<SubjectNode> Taxonomy::children(std::string_view code) const {
  std::vector<SubjectNode> out;
  for (const auto& c : lookup(code).children) out.push_back(nodes_.at(c));
  return out;
}

std::vector<SubjectNode> Taxonomy::nodes() const {
  std::vector<SubjectNode> out;
  for (const auto& code : order_) out.push_back(nodes_.at(code));
  return out;
}

bool Taxonomy::contains(std::string_view code) const { return nodes_.find(code) != nodes_.end(); }

ValidationReport validate_subject_codes(const WorkRecord& record, const Taxonomy& taxonomy) {
  ValidationReport report;
  for (std::size_t i = 0; i < record.subjects.size(); ++i)
    if (!taxonomy.contains(record.subjects[i]))
      report.add(Severity::error, "SUBJ_UNKNOWN", "subjects[" + std::to_string(i) + "]",
                 "unknown subject code '" + record.subjects[i] + "'");
  report.sort();
  return report;
}

}  // namespace workauth
