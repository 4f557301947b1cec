#pragma once

#include <filesystem>
#include <optional>
#include <vector>

#include "workauth/model.hpp"
#include "workauth/namespaces.hpp"
#include "workauth/taxonomy.hpp"
#include "workauth/validate.hpp"

namespace workauth {

/// Result of reading, parsing and validating one record file.
struct FileOutcome {
  std::filesystem::path path;
  std::optional<WorkRecord> record;
  /// Parse failures appear as a single error item.
  ValidationReport report;
  bool io_error = false;
};

/// Files stay as given; directories expand to their *.xml files (recursive,
/// sorted). Throws Error("IO_ERROR") for a missing path.
std::vector<std::filesystem::path> expand_inputs(const std::vector<std::filesystem::path>& inputs);

/// One outcome per file, in input order. OpenMP-parallel over files.
std::vector<FileOutcome> load_records(const std::vector<std::filesystem::path>& files,
                                      const NamespaceTable& ns = NamespaceTable::defaults(),
                                      const Taxonomy& taxonomy = Taxonomy::builtin());
/// Serial reference for load_records.
std::vector<FileOutcome> load_records_serial(const std::vector<std::filesystem::path>& files,
                                             const NamespaceTable& ns = NamespaceTable::defaults(),
                                             const Taxonomy& taxonomy = Taxonomy::builtin());

}  // namespace workauth
