#include "workauth/uri.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>

#include "workauth/error.hpp"

namespace workauth {

namespace {

constexpr std::array<std::pair<EntityKind, std::string_view>, 5> kKinds{{
    {EntityKind::work, "work"},
    {EntityKind::manuscript, "manuscript"},
    {EntityKind::bibl, "bibl"},
    {EntityKind::person, "person"},
    {EntityKind::place, "place"},
}};

bool is_space(char c) { return std::isspace(static_cast<unsigned char>(c)) != 0; }

bool all_digits(std::string_view s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), [](char c) { return c >= '0' && c <= '9'; });
}

}  // namespace

std::string_view to_string(EntityKind kind) {
  for (const auto& [k, name] : kKinds)
    if (k == kind) return name;
  return "work";
}

std::string_view to_string(UriKind kind) {
  switch (kind) {
    case UriKind::work: return "work";
    case UriKind::manuscript: return "manuscript";
    case UriKind::bibl: return "bibl";
    case UriKind::person: return "person";
    case UriKind::place: return "place";
    case UriKind::foreign: return "foreign";
  }
  return "foreign";
}

std::optional<EntityKind> entity_kind_from_string(std::string_view segment) {
  for (const auto& [k, name] : kKinds)
    if (name == segment) return k;
  return std::nullopt;
}

bool is_valid_fragment(std::string_view fragment) {
  return !fragment.empty() &&
         std::none_of(fragment.begin(), fragment.end(), [](char c) { return c == '#' || is_space(c); });
}

bool is_absolute_iri(std::string_view text) {
  auto colon = text.find(':');
  if (colon == std::string_view::npos || colon == 0) return false;
  if (!std::isalpha(static_cast<unsigned char>(text[0]))) return false;
  for (std::size_t i = 1; i < colon; ++i) {
    char c = text[i];
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '+' && c != '-' && c != '.') return false;
  }
  if (colon + 1 == text.size()) return false;
  for (char c : text) {
    auto u = static_cast<unsigned char>(c);
    if (u <= 0x20 || c == '<' || c == '>' || c == '"' || c == '{' || c == '}' || c == '|' ||
        c == '\\' || c == '^' || c == '`')
      return false;
  }
  return true;
}

std::optional<EntityUri> EntityUri::try_parse(std::string_view text) {
  if (!text.starts_with(kUriAuthority)) return std::nullopt;
  auto rest = text.substr(kUriAuthority.size());
  auto slash = rest.find('/');
  if (slash == std::string_view::npos) return std::nullopt;
  auto kind = entity_kind_from_string(rest.substr(0, slash));
  if (!kind) return std::nullopt;
  rest = rest.substr(slash + 1);
  std::optional<std::string> fragment;
  auto hash = rest.find('#');
  auto digits = rest.substr(0, hash);
  if (hash != std::string_view::npos) {
    auto frag = rest.substr(hash + 1);
    if (!is_valid_fragment(frag)) return std::nullopt;
    fragment = std::string(frag);
  }
  if (!all_digits(digits) || (digits.size() > 1 && digits.front() == '0')) return std::nullopt;
  std::uint64_t id = 0;
  auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), id);
  if (ec != std::errc() || ptr != digits.data() + digits.size()) return std::nullopt;
  return EntityUri{*kind, id, std::move(fragment)};
}

EntityUri EntityUri::parse(std::string_view text) {
  if (auto uri = try_parse(text)) return *uri;
  throw Error("URI_INVALID", "not an entity URI: '" + std::string(text) + "'");
}

std::string EntityUri::render() const {
  std::string out(kUriAuthority);
  out += to_string(kind);
  out += '/';
  out += std::to_string(id);
  if (fragment) {
    out += '#';
    out += *fragment;
  }
  return out;
}

UriKind uri_kind(std::string_view uri) {
  if (!is_absolute_iri(uri)) throw Error("URI_INVALID", "malformed URI: '" + std::string(uri) + "'");
  if (!uri.starts_with(kUriAuthority)) return UriKind::foreign;
  auto rest = uri.substr(kUriAuthority.size());
  auto segment = rest.substr(0, rest.find_first_of("/#?"));
  auto kind = entity_kind_from_string(segment);
  if (!kind) return UriKind::foreign;
  auto parsed = EntityUri::try_parse(uri);
  if (!parsed)
    throw Error("URI_INVALID", "malformed " + std::string(segment) + " URI: '" + std::string(uri) + "'");
  switch (parsed->kind) {
    case EntityKind::work: return UriKind::work;
    case EntityKind::manuscript: return UriKind::manuscript;
    case EntityKind::bibl: return UriKind::bibl;
    case EntityKind::person: return UriKind::person;
    case EntityKind::place: return UriKind::place;
  }
  return UriKind::foreign;
}

}  // namespace workauth
