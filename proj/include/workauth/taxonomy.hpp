#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "workauth/model.hpp"
#include "workauth/validate.hpp"

namespace workauth {

struct SubjectNode {
  std::string code;
  std::string label;
  std::optional<std::string> parent;
  std::vector<std::string> children;

  friend bool operator==(const SubjectNode&, const SubjectNode&) = default;
};

/// Two-level subject vocabulary keyed by dotted codes ("5", "5.a").
class Taxonomy {
 public:
  /// The preliminary subject taxonomy for Syriac works (14 top-level entries).
  static const Taxonomy& builtin();

  /// Reads tab-separated "code<TAB>parent<TAB>label" lines; empty parent
  /// marks a top-level entry. Throws Error("TAXONOMY_INVALID").
  static Taxonomy parse_table(std::string_view text);
  static Taxonomy load(const std::filesystem::path& path);
  std::string to_table() const;

  /// Throws Error("NOT_FOUND").
  const SubjectNode& lookup(std::string_view code) const;
  std::vector<SubjectNode> children(std::string_view code) const;
  const std::vector<std::string>& roots() const { return roots_; }
  /// All nodes in document order.
  std::vector<SubjectNode> nodes() const;
  bool contains(std::string_view code) const;

  friend bool operator==(const Taxonomy&, const Taxonomy&) = default;

 private:
  void add(std::string code, std::optional<std::string> parent, std::string label);

  std::vector<std::string> order_;
  std::vector<std::string> roots_;
  std::map<std::string, SubjectNode, std::less<>> nodes_;
};

/// One SUBJ_UNKNOWN error per code outside the taxonomy.
ValidationReport validate_subject_codes(const WorkRecord& record,
                                        const Taxonomy& taxonomy = Taxonomy::builtin());

}  // namespace workauth
