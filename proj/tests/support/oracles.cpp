#include "oracles.hpp"

#include <algorithm>
#include <cctype>
#include <deque>
#include <regex>
#include <sstream>
#include <stdexcept>

namespace workauth::testing {

namespace {

const std::map<std::string, std::string> kPrefixes = {
    {"lawd", "http://lawd.info/ontology/"},  {"dct", "http://purl.org/dc/terms/"},
    {"syriaca", "http://syriaca.org/schema#"}, {"rdf", "http://www.w3.org/1999/02/22-rdf-syntax-ns#"},
    {"bf", "http://bibframe.org/vocab/"}};

void append_utf8(std::string& out, unsigned long cp) {
  if (cp < 0x80) {
    out += static_cast<char>(cp);
  } else if (cp < 0x800) {
    out += static_cast<char>(0xC0 | (cp >> 6));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  } else if (cp < 0x10000) {
    out += static_cast<char>(0xE0 | (cp >> 12));
    out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  } else {
    out += static_cast<char>(0xF0 | (cp >> 18));
    out += static_cast<char>(0x80 | ((cp >> 12) & 0x3F));
    out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  }
}

[[noreturn]] void fail(const std::string& what) { throw std::runtime_error("rdf reader: " + what); }

/// Cursor over a string with the term grammar shared by both readers.
struct Cursor {
  const std::string& s;
  std::size_t i = 0;

  bool done() const { return i >= s.size(); }
  char peek() const { return done() ? '\0' : s[i]; }

  void skip_space(bool comments) {
    while (!done()) {
      if (s[i] == ' ' || s[i] == '\t' || s[i] == '\n' || s[i] == '\r') {
        ++i;
      } else if (comments && s[i] == '#') {
        while (!done() && s[i] != '\n') ++i;
      } else {
        break;
      }
    }
  }

  unsigned long hex(std::size_t n) {
    if (i + n > s.size()) fail("truncated escape");
    auto v = std::stoul(s.substr(i, n), nullptr, 16);
    i += n;
    return v;
  }

  std::string iri() {
    if (peek() != '<') fail("expected '<'");
    ++i;
    std::string out;
    while (!done() && s[i] != '>') {
      if (s[i] == '\\') {
        ++i;
        char c = s[i++];
        if (c == 'u') append_utf8(out, hex(4));
        else if (c == 'U') append_utf8(out, hex(8));
        else fail("bad IRI escape");
      } else if (static_cast<unsigned char>(s[i]) <= 0x20) {
        fail("space in IRI");
      } else {
        out += s[i++];
      }
    }
    if (done()) fail("unterminated IRI");
    ++i;
    return out;
  }

  std::pair<std::string, std::string> literal() {
    if (peek() != '"') fail("expected '\"'");
    ++i;
    std::string out;
    while (!done() && s[i] != '"') {
      if (s[i] == '\n') fail("newline in literal");
      if (s[i] == '\\') {
        ++i;
        char c = s[i++];
        switch (c) {
          case 'n': out += '\n'; break;
          case 'r': out += '\r'; break;
          case 't': out += '\t'; break;
          case 'b': out += '\b'; break;
          case 'f': out += '\f'; break;
          case '"': out += '"'; break;
          case '\'': out += '\''; break;
          case '\\': out += '\\'; break;
          case 'u': append_utf8(out, hex(4)); break;
          case 'U': append_utf8(out, hex(8)); break;
          default: fail("bad literal escape");
        }
      } else {
        out += s[i++];
      }
    }
    if (done()) fail("unterminated literal");
    ++i;
    std::string lang;
    if (peek() == '@') {
      ++i;
      while (!done() && (std::isalnum(static_cast<unsigned char>(s[i])) || s[i] == '-')) lang += s[i++];
      if (lang.empty()) fail("empty language tag");
    }
    return {out, lang};
  }
};

}  // namespace

TripleSet read_ntriples(const std::string& text, std::size_t* statements) {
  TripleSet out;
  std::size_t count = 0;
  std::istringstream lines(text);
  std::string line;
  while (std::getline(lines, line)) {
    Cursor c{line};
    c.skip_space(false);
    if (c.done() || c.peek() == '#') continue;
    auto s = c.iri();
    c.skip_space(false);
    auto p = c.iri();
    c.skip_space(false);
    PlainTriple t;
    if (c.peek() == '<') {
      t = {s, p, c.iri(), false, ""};
    } else {
      auto [lex, lang] = c.literal();
      t = {s, p, lex, true, lang};
    }
    c.skip_space(false);
    if (c.peek() != '.') fail("expected '.' in: " + line);
    ++c.i;
    c.skip_space(false);
    if (!c.done()) fail("trailing text in: " + line);
    out.insert(t);
    ++count;
  }
  if (statements) *statements = count;
  return out;
}

TripleSet read_turtle(const std::string& text, std::size_t* statements) {
  Cursor c{text};
  std::map<std::string, std::string> prefixes;
  TripleSet out;
  std::size_t count = 0;

  auto pname = [&]() {
    std::string token;
    while (!c.done()) {
      char ch = c.peek();
      if (std::isalnum(static_cast<unsigned char>(ch)) || ch == '_' || ch == '-' || ch == ':' || ch == '.') token += c.s[c.i++];
      else break;
    }
    while (!token.empty() && token.back() == '.') {
      token.pop_back();
      --c.i;
    }
    return token;
  };
  auto expand = [&](const std::string& token) {
    if (token == "a") return std::string("http://www.w3.org/1999/02/22-rdf-syntax-ns#type");
    auto colon = token.find(':');
    if (colon == std::string::npos) fail("not a prefixed name: " + token);
    auto it = prefixes.find(token.substr(0, colon));
    if (it == prefixes.end()) fail("unknown prefix in " + token);
    return it->second + token.substr(colon + 1);
  };
  auto iri_term = [&]() { return c.peek() == '<' ? c.iri() : expand(pname()); };
  auto expect = [&](char ch) {
    c.skip_space(true);
    if (c.peek() != ch) fail(std::string("expected '") + ch + "' at offset " + std::to_string(c.i));
    ++c.i;
  };

  while (true) {
    c.skip_space(true);
    if (c.done()) break;
    if (c.s.compare(c.i, 7, "@prefix") == 0) {
      c.i += 7;
      c.skip_space(true);
      auto name = pname();
      if (name.empty() || name.back() != ':') fail("bad prefix declaration");
      c.skip_space(true);
      prefixes[name.substr(0, name.size() - 1)] = c.iri();
      expect('.');
      continue;
    }
    auto subject = iri_term();
    while (true) {
      c.skip_space(true);
      auto predicate = iri_term();
      while (true) {
        c.skip_space(true);
        if (c.peek() == '"') {
          auto [lex, lang] = c.literal();
          out.insert({subject, predicate, lex, true, lang});
        } else {
          out.insert({subject, predicate, iri_term(), false, ""});
        }
        ++count;
        c.skip_space(true);
        if (c.peek() == ',') {
          ++c.i;
          continue;
        }
        break;
      }
      c.skip_space(true);
      if (c.peek() == ';') {
        ++c.i;
        c.skip_space(true);
        if (c.peek() == '.') break;
        continue;
      }
      break;
    }
    expect('.');
  }
  if (statements) *statements = count;
  return out;
}

std::vector<PlainTriple> brute_force_relation_triples(const std::string& tei, const std::string& base) {
  std::vector<PlainTriple> out;
  const std::regex tag(R"(<relation\b([^>]*)>)");
  const std::regex attr(R"re(([A-Za-z:]+)="([^"]*)")re");
  auto split = [](const std::string& v) {
    std::vector<std::string> parts;
    std::istringstream in(v);
    std::string token;
    while (in >> token) parts.push_back(token);
    return parts;
  };
  auto resolve = [&](const std::string& ref) { return ref.front() == '#' ? base + ref : ref; };
  for (auto it = std::sregex_iterator(tei.begin(), tei.end(), tag); it != std::sregex_iterator(); ++it) {
    std::map<std::string, std::string> attrs;
    const std::string body = (*it)[1];
    for (auto a = std::sregex_iterator(body.begin(), body.end(), attr); a != std::sregex_iterator(); ++a)
      attrs[(*a)[1]] = (*a)[2];
    auto ref = attrs.at("ref");
    auto colon = ref.find(':');
    auto predicate = kPrefixes.at(ref.substr(0, colon)) + ref.substr(colon + 1);
    for (const auto& s : split(attrs["active"]))
      for (const auto& o : split(attrs["passive"])) out.emplace_back(resolve(s), predicate, resolve(o), false, "");
  }
  return out;
}

namespace {

std::size_t code_points(const std::string& s) {
  return static_cast<std::size_t>(
      std::count_if(s.begin(), s.end(), [](char ch) { return (static_cast<unsigned char>(ch) & 0xC0) != 0x80; }));
}

std::string incipit_prefix(const std::vector<std::string>& tokens) {
  std::string out;
  for (std::size_t i = 0; i < tokens.size() && i < 5; ++i) out += (i ? " " : "") + tokens[i];
  return out;
}

}  // namespace

std::set<std::pair<std::string, std::string>> brute_force_blocking(const std::vector<linkage::LinkItem>& items) {
  std::set<std::pair<std::string, std::string>> out;
  for (std::size_t i = 0; i < items.size(); ++i) {
    for (std::size_t j = i + 1; j < items.size(); ++j) {
      const auto& a = items[i];
      const auto& b = items[j];
      bool hit = a.author && b.author && *a.author == *b.author;
      for (const auto& ta : a.title_tokens)
        for (const auto& x : ta)
          for (const auto& tb : b.title_tokens)
            for (const auto& y : tb)
              if (!hit && x == y && code_points(x) >= 4) hit = true;
      if (!hit && a.incipit_tokens && b.incipit_tokens && !a.incipit_tokens->empty() && !b.incipit_tokens->empty())
        hit = incipit_prefix(*a.incipit_tokens) == incipit_prefix(*b.incipit_tokens);
      if (hit) out.emplace(std::min(a.id, b.id), std::max(a.id, b.id));
    }
  }
  return out;
}

std::vector<std::vector<std::string>> components(const std::vector<std::string>& nodes,
                                                 const std::vector<std::pair<std::string, std::string>>& edges) {
  std::map<std::string, std::vector<std::string>> adjacent;
  for (const auto& n : nodes) adjacent[n];
  for (const auto& [a, b] : edges) {
    adjacent[a].push_back(b);
    adjacent[b].push_back(a);
  }
  std::set<std::string> seen;
  std::vector<std::vector<std::string>> out;
  for (const auto& [start, unused] : adjacent) {
    if (seen.contains(start)) continue;
    std::vector<std::string> group;
    std::deque<std::string> queue{start};
    seen.insert(start);
    while (!queue.empty()) {
      auto n = queue.front();
      queue.pop_front();
      group.push_back(n);
      for (const auto& m : adjacent[n])
        if (seen.insert(m).second) queue.push_back(m);
    }
    std::sort(group.begin(), group.end());
    out.push_back(std::move(group));
  }
  std::sort(out.begin(), out.end());
  return out;
}

namespace {

bool is_work_uri(const std::string& s) {
  static const std::regex work(R"(http://syriaca\.org/work/(0|[1-9][0-9]*))");
  return std::regex_match(s, work);
}

std::string expand(const std::string& curie) {
  auto colon = curie.find(':');
  return kPrefixes.at(curie.substr(0, colon)) + curie.substr(colon + 1);
}

/// Canonical predicate and whether the stored form is the inverse one.
std::pair<std::string, bool> canonical(const std::string& iri) {
  static const std::map<std::string, std::string> inverse_to_forward = {
      {expand("syriaca:isVersionOf"), expand("syriaca:hasVersion")},
      {expand("syriaca:isRecensionOf"), expand("syriaca:hasRecension")},
      {expand("bf:translationOf"), expand("bf:translation")}};
  auto it = inverse_to_forward.find(iri);
  if (it == inverse_to_forward.end()) return {iri, false};
  return {it->second, true};
}

/// Does record r state a (canonical p) relationship between works x and y?
bool states(const WorkRecord& r, const std::string& x, const std::string& y, const std::string& p) {
  for (const auto& rel : r.relations) {
    if (canonical(expand(rel.predicate)).first != p) continue;
    for (const auto& s : rel.subjects)
      for (const auto& o : rel.objects)
        if (is_work_uri(s.value) && is_work_uri(o.value) && s.value != o.value &&
            ((s.value == x && o.value == y) || (s.value == y && o.value == x)))
          return true;
  }
  return false;
}

}  // namespace

std::set<std::tuple<std::string, std::string, std::string, std::string>> brute_force_direction_scan(
    const std::vector<WorkRecord>& corpus) {
  std::set<std::string> predicates;
  for (const auto& r : corpus)
    for (const auto& rel : r.relations) predicates.insert(canonical(expand(rel.predicate)).first);

  std::set<std::tuple<std::string, std::string, std::string, std::string>> out;
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    for (std::size_t j = i + 1; j < corpus.size(); ++j) {
      auto a = corpus[i].uri.render();
      auto b = corpus[j].uri.render();
      if (b < a) std::swap(a, b);
      for (const auto& p : predicates)
        if (states(corpus[i], a, b, p) && states(corpus[j], a, b, p)) out.emplace("both_sides", a, b, p);
    }
  }
  for (const auto& r : corpus) {
    const auto self = r.uri.render();
    for (const auto& rel : r.relations) {
      auto [p, inverse] = canonical(expand(rel.predicate));
      if (!inverse) continue;
      for (const auto& s : rel.subjects)
        for (const auto& o : rel.objects)
          if (o.value == self && is_work_uri(s.value) && s.value != self) out.emplace("derived_on_parent", self, s.value, p);
    }
  }
  return out;
}

TripleSet contract_expansion(const TripleSet& expanded, const std::string& original_uri, const std::string& new_uri) {
  const auto has_version = expand("syriaca:hasVersion");
  const auto has_recension = expand("syriaca:hasRecension");
  const auto embodies = expand("lawd:embodies");
  const auto type = expand("rdf:type");
  auto remap = [&](const std::string& iri) {
    if (iri.rfind(new_uri + "#", 0) == 0) return original_uri + iri.substr(new_uri.size());
    return iri;
  };

  std::vector<std::pair<std::string, std::string>> links;  // (subject, embodied predicate)
  std::vector<std::string> witnesses;
  TripleSet out;
  for (const auto& [s, p, o, literal, lang] : expanded) {
    if (!literal && o == new_uri && (p == has_version || p == has_recension)) {
      links.emplace_back(s, p == has_version ? expand("syriaca:hasEmbodiedVersion") : expand("syriaca:hasEmbodiedRecension"));
    } else if (!literal && o == new_uri && p == embodies) {
      witnesses.push_back(s);
    } else if (s == new_uri && p == type) {
      continue;
    } else {
      out.emplace(remap(s), p, literal ? o : remap(o), literal, lang);
    }
  }
  for (const auto& [s, p] : links)
    for (const auto& x : witnesses) out.emplace(remap(s), p, remap(x), false, "");
  return out;
}

}  // namespace workauth::testing
