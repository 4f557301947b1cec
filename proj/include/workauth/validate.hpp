#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "workauth/model.hpp"
#include "workauth/namespaces.hpp"

namespace workauth {

enum class Severity { error, warning };

std::string_view to_string(Severity severity);

struct ValidationItem {
  Severity severity = Severity::error;
  std::string code;
  std::string path;
  std::string message;

  friend bool operator==(const ValidationItem&, const ValidationItem&) = default;
};

struct ValidationReport {
  std::vector<ValidationItem> items;

  bool valid() const;
  std::size_t error_count() const;
  std::size_t warning_count() const;
  bool has_code(std::string_view code) const;

  void add(Severity severity, std::string code, std::string path, std::string message);
  void append(const ValidationReport& other);
  /// Sorts by (path, code, message); call after appending.
  void sort();
  /// Warnings become errors (the --strict policy).
  void promote_warnings();

  friend bool operator==(const ValidationReport&, const ValidationReport&) = default;
};

/// Checks every record-level invariant. Violations are report items, never
/// exceptions. Ordering is deterministic by (path, code).
ValidationReport validate_record(const WorkRecord& record,
                                 const NamespaceTable& ns = NamespaceTable::defaults());

}  // namespace workauth
