#include "workauth/model.hpp"

#include <algorithm>
#include <cctype>

#include "workauth/error.hpp"

namespace workauth {

namespace {
bool is_space(char c) { return std::isspace(static_cast<unsigned char>(c)) != 0; }
}  // namespace

std::string normalize_space(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  bool pending = false;
  for (char c : text) {
    if (is_space(c)) {
      pending = !out.empty();
      continue;
    }
    if (pending) out += ' ';
    pending = false;
    out += c;
  }
  return out;
}

std::vector<std::string> split_tokens(std::string_view text) {
  std::vector<std::string> out;
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && is_space(text[i])) ++i;
    std::size_t start = i;
    while (i < text.size() && !is_space(text[i])) ++i;
    if (i > start) out.emplace_back(text.substr(start, i - start));
  }
  return out;
}

LocalPointer LocalPointer::parse(std::string_view token) {
  if (token.size() < 2 || token.front() != '#' ||
      std::any_of(token.begin(), token.end(), [](char c) { return is_space(c); }) ||
      token.find('#', 1) != std::string_view::npos)
    throw Error("POINTER_INVALID", "not a local pointer: '" + std::string(token) + "'");
  return LocalPointer{std::string(token.substr(1))};
}

InlineText InlineText::plain(std::string text) {
  InlineText t;
  if (!text.empty()) t.spans.push_back({std::nullopt, std::move(text)});
  return t;
}

std::string InlineText::str() const {
  std::string out;
  for (const auto& s : spans) out += s.text;
  return out;
}

bool InlineText::empty() const { return normalize_space(str()).empty(); }

bool TitleEntry::is_headword() const {
  return std::find(tags.begin(), tags.end(), kHeadwordTag) != tags.end();
}

std::string AuthorRef::display_name() const {
  if (name.empty()) return display;
  std::string out;
  for (const auto& part : name) {
    if (!out.empty()) out += ' ';
    out += part.text;
  }
  return out;
}

std::string_view to_string(NoteType type) {
  switch (type) {
    case NoteType::abstract: return "abstract";
    case NoteType::prologue: return "prologue";
    case NoteType::incipit: return "incipit";
    case NoteType::explicit_: return "explicit";
    case NoteType::disambiguation: return "disambiguation";
  }
  return "abstract";
}

std::optional<NoteType> note_type_from_string(std::string_view text) {
  for (auto t : {NoteType::abstract, NoteType::prologue, NoteType::incipit, NoteType::explicit_,
                 NoteType::disambiguation})
    if (to_string(t) == text) return t;
  return std::nullopt;
}

bool note_requires_quote(NoteType type) {
  return type == NoteType::prologue || type == NoteType::incipit || type == NoteType::explicit_;
}

std::string_view Reference::local_id() const {
  return is_local() ? std::string_view(value).substr(1) : std::string_view{};
}

const BiblWitness* WorkRecord::find_witness(std::string_view local_id) const {
  for (const auto& w : witnesses)
    if (w.local_id == local_id) return &w;
  return nullptr;
}

std::optional<TitleEntry> canonical_headword(const WorkRecord& record, std::string_view lang) {
  for (const auto& t : record.titles)
    if (t.lang == lang && t.is_headword()) return t;
  return std::nullopt;
}

}  // namespace workauth
