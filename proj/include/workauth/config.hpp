#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>

#include "workauth/linkage.hpp"
#include "workauth/namespaces.hpp"

namespace workauth {

/// key = value settings file. Recognized keys:
///   ns.<prefix>          namespace binding
///   weight.title|author|incipit
///   threshold.auto|review
///   taxonomy             subject table (see Taxonomy::parse_table)
class Config {
 public:
  static Config parse(std::string_view text);
  static Config load(const std::filesystem::path& path);

  std::optional<std::string> get(std::string_view key) const;
  /// Throws Error("CONFIG_INVALID") when present but not a number.
  std::optional<double> get_number(std::string_view key) const;
  const std::map<std::string, std::string, std::less<>>& entries() const { return entries_; }

  NamespaceTable namespaces() const;
  linkage::Weights weights() const;
  linkage::Thresholds thresholds() const;

 private:
  std::map<std::string, std::string, std::less<>> entries_;
};

}  // namespace workauth
