#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>

namespace workauth {

/// Prefix → IRI base bindings used to expand CURIEs.
class NamespaceTable {
 public:
  /// lawd, bf, dct, syriaca, rdf plus the remaining comparison vocabularies.
  static NamespaceTable defaults();

  /// Reads `prefix = IRI` lines ('#' comments allowed) over the defaults.
  /// Keys may carry an optional "ns." qualifier.
  static NamespaceTable load(const std::filesystem::path& path);

  void bind(std::string prefix, std::string base);
  std::optional<std::string_view> lookup(std::string_view prefix) const;
  const std::map<std::string, std::string>& bindings() const { return bindings_; }

  friend bool operator==(const NamespaceTable&, const NamespaceTable&) = default;

 private:
  std::map<std::string, std::string> bindings_;
};

/// Splits "prefix:local". Returns nullopt when there is no colon or the
/// prefix is empty.
std::optional<std::pair<std::string_view, std::string_view>> split_curie(std::string_view curie);

/// Expands a bound CURIE. Throws Error("UNBOUND_PREFIX") naming the prefix,
/// or Error("CURIE_INVALID") for text without a prefix.
std::string expand_curie(std::string_view curie, const NamespaceTable& ns);

}  // namespace workauth
