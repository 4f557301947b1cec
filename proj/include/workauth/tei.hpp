#pragma once

#include <string>
#include <string_view>

#include "workauth/model.hpp"
#include "workauth/validate.hpp"

namespace workauth {

inline constexpr std::string_view kTeiNamespace = "http://www.tei-c.org/ns/1.0";

/// Parses one TEI work document. Errors:
///   PARSE_ERROR (xml::ParseError) for malformed XML, with line/column;
///   MODEL_CARDINALITY when the body has zero or several work bibls;
///   MODEL_NO_URI when no URI idno is declared;
///   MODEL_ID_MISMATCH when the bibl xml:id disagrees with the URI idno;
///   MODEL_INVALID for values that cannot be represented (bad pointers, URIs).
WorkRecord parse_work_record(std::string_view document);

/// Canonical serialization. Refuses invalid records with
/// RecordRejected carrying the report.
std::string serialize_work_record(const WorkRecord& record);

class RecordRejected : public Error {
 public:
  explicit RecordRejected(ValidationReport report);
  const ValidationReport& report() const noexcept { return report_; }

 private:
  ValidationReport report_;
};

/// `{base}#{target}`. Throws Error("POINTER_BASE") when base is not a
/// fragment-less work URI, Error("POINTER_INVALID") for an empty target.
std::string resolve_pointer(const EntityUri& base, const LocalPointer& ptr);
/// Same, accepting the "#id" token form.
std::string resolve_pointer(const EntityUri& base, std::string_view token);

}  // namespace workauth
