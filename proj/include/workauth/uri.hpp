#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace workauth {

inline constexpr std::string_view kUriAuthority = "http://syriaca.org/";

enum class EntityKind { work, manuscript, bibl, person, place };

/// Result of classifying an arbitrary IRI string.
enum class UriKind { work, manuscript, bibl, person, place, foreign };

std::string_view to_string(EntityKind kind);
std::string_view to_string(UriKind kind);
std::optional<EntityKind> entity_kind_from_string(std::string_view segment);

/// Stable identifier of a record: http://syriaca.org/{kind}/{id}[#fragment].
struct EntityUri {
  EntityKind kind = EntityKind::work;
  std::uint64_t id = 0;
  std::optional<std::string> fragment;

  /// Throws Error("URI_INVALID") unless text matches the rendered form exactly.
  static EntityUri parse(std::string_view text);
  static std::optional<EntityUri> try_parse(std::string_view text);

  std::string render() const;
  EntityUri without_fragment() const { return {kind, id, std::nullopt}; }

  friend bool operator==(const EntityUri&, const EntityUri&) = default;
  friend auto operator<=>(const EntityUri&, const EntityUri&) = default;
};

/// True for a non-empty fragment token with no '#' and no whitespace.
bool is_valid_fragment(std::string_view fragment);

/// True when text looks like an absolute IRI (scheme ":" rest, no
/// whitespace or IRI-forbidden characters).
bool is_absolute_iri(std::string_view text);

/// Classifies by path segment under the syriaca.org authority. Anything
/// outside it is `foreign`. Throws Error("URI_INVALID") for strings that
/// are not absolute IRIs, or that claim a known kind with a bad id.
UriKind uri_kind(std::string_view uri);

}  // namespace workauth
