#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "workauth/uri.hpp"
#include "workauth/xml.hpp"

namespace workauth {

/// Attributes not covered by the model, kept so they survive a round trip.
using ExtraAttributes = std::vector<std::pair<std::string, std::string>>;

/// A "#id" pointer to an element in the same document; stores the id only.
struct LocalPointer {
  std::string target_id;

  /// Accepts "#id". Throws Error("POINTER_INVALID") for anything else.
  static LocalPointer parse(std::string_view token);
  std::string render() const { return "#" + target_id; }

  friend bool operator==(const LocalPointer&, const LocalPointer&) = default;
  friend auto operator<=>(const LocalPointer&, const LocalPointer&) = default;
};

/// One run of text; lang is set for embedded foreign-language spans.
struct TextSpan {
  std::optional<std::string> lang;
  std::string text;

  friend bool operator==(const TextSpan&, const TextSpan&) = default;
};

/// Mixed content: plain text interleaved with language-tagged spans.
struct InlineText {
  std::vector<TextSpan> spans;

  static InlineText plain(std::string text);
  std::string str() const;
  bool empty() const;

  friend bool operator==(const InlineText&, const InlineText&) = default;
};

inline constexpr std::string_view kHeadwordTag = "#syriaca-headword";
inline constexpr std::string_view kAnglicizedTag = "#syriaca-anglicized";

struct TitleEntry {
  std::string local_id;
  std::string lang;
  InlineText text;
  std::vector<LocalPointer> sources;
  /// Raw syriaca-tags tokens in document order.
  std::vector<std::string> tags;
  ExtraAttributes extra;

  bool is_headword() const;
  friend bool operator==(const TitleEntry&, const TitleEntry&) = default;
};

/// forename / surname / other name part of a person reference.
struct NamePart {
  std::string element;  // "forename", "surname", "name", ...
  std::string text;
  ExtraAttributes attrs;

  friend bool operator==(const NamePart&, const NamePart&) = default;
};

struct AuthorRef {
  std::optional<EntityUri> person;
  std::vector<NamePart> name;
  /// Text written directly inside the author element, when no parts are used.
  std::string display;
  std::vector<LocalPointer> sources;
  ExtraAttributes extra;

  std::string display_name() const;
  friend bool operator==(const AuthorRef&, const AuthorRef&) = default;
};

struct TextLang {
  std::string main;
  std::string label;
  std::vector<LocalPointer> sources;

  friend bool operator==(const TextLang&, const TextLang&) = default;
};

enum class NoteType { abstract, prologue, incipit, explicit_, disambiguation };

std::string_view to_string(NoteType type);
std::optional<NoteType> note_type_from_string(std::string_view text);
/// prologue, incipit and explicit carry quoted excerpts.
bool note_requires_quote(NoteType type);

struct NoteSegment {
  std::optional<std::string> lang;
  std::string text;

  friend bool operator==(const NoteSegment&, const NoteSegment&) = default;
};

struct NotePart {
  NoteType type = NoteType::abstract;
  std::vector<NoteSegment> segments;
  std::vector<LocalPointer> sources;
  bool quoted = false;
  ExtraAttributes extra;

  friend bool operator==(const NotePart&, const NotePart&) = default;
};

struct IdnoEntry {
  std::string scheme;
  std::string value;

  friend bool operator==(const IdnoEntry&, const IdnoEntry&) = default;
  friend auto operator<=>(const IdnoEntry&, const IdnoEntry&) = default;
};

struct CitedRange {
  std::string unit;
  std::string from;
  std::string to;
  std::string display;

  friend bool operator==(const CitedRange&, const CitedRange&) = default;
};

struct WitnessTitle {
  std::optional<std::string> level;
  std::string lang;
  std::string text;

  friend bool operator==(const WitnessTitle&, const WitnessTitle&) = default;
};

struct MsIdentifier {
  std::string country;
  std::string settlement;
  std::string collection;
  std::optional<std::string> collection_lang;
  EntityUri uri;
  std::vector<IdnoEntry> alt_idnos;

  friend bool operator==(const MsIdentifier&, const MsIdentifier&) = default;
};

struct Locus {
  std::string from;
  std::string to;
  std::string display;
  std::optional<EntityUri> part_uri;

  friend bool operator==(const Locus&, const Locus&) = default;
};

/// A person named in a witness (author or editor of an edition).
struct Creator {
  std::string role = "author";
  std::vector<NamePart> name;

  friend bool operator==(const Creator&, const Creator&) = default;
};

inline constexpr std::string_view kWrittenWorkClass = "lawd:WrittenWork";

/// A manuscript or publication embodying the work.
struct BiblWitness {
  std::string local_id;
  std::string witness_class;
  std::vector<Creator> creators;
  std::optional<WitnessTitle> title;
  std::optional<EntityUri> record_ptr;
  std::vector<CitedRange> cited_ranges;
  std::optional<MsIdentifier> ms_identifier;
  std::optional<Locus> locus;
  std::optional<std::string> text_lang;
  ExtraAttributes extra;
  /// Unrecognized child elements, re-emitted verbatim.
  std::vector<xml::Element> extensions;

  bool is_manuscript() const { return witness_class == kWrittenWorkClass && ms_identifier.has_value(); }
  friend bool operator==(const BiblWitness&, const BiblWitness&) = default;
};

/// A relation reference: either "#local-id" or an absolute IRI.
struct Reference {
  std::string value;

  bool is_local() const { return !value.empty() && value.front() == '#'; }
  /// Target id for local references (without '#').
  std::string_view local_id() const;

  friend bool operator==(const Reference&, const Reference&) = default;
  friend auto operator<=>(const Reference&, const Reference&) = default;
};

/// subject(s) --predicate--> object(s), stored as active/ref/passive.
struct RelationTriple {
  std::optional<std::string> local_id;
  std::optional<std::string> rel_type;
  std::vector<Reference> subjects;
  std::string predicate;
  std::vector<Reference> objects;
  std::vector<LocalPointer> sources;
  ExtraAttributes extra;

  friend bool operator==(const RelationTriple&, const RelationTriple&) = default;
};

struct ChangeEntry {
  std::string who;
  std::string when;
  std::string what;

  friend bool operator==(const ChangeEntry&, const ChangeEntry&) = default;
};

/// The abstract work: every text sharing the same intellectual source.
/// One TEI document per record.
struct WorkRecord {
  EntityUri uri;
  std::vector<AuthorRef> authors;
  std::vector<TitleEntry> titles;
  std::optional<TextLang> text_lang;
  std::vector<NotePart> notes;
  std::vector<IdnoEntry> idnos;
  std::vector<BiblWitness> witnesses;
  std::vector<RelationTriple> relations;
  std::vector<std::string> subjects;
  std::vector<std::string> editors;
  std::vector<ChangeEntry> change_log;
  /// Unrecognized children of the work bibl, re-emitted verbatim.
  std::vector<xml::Element> extensions;

  const BiblWitness* find_witness(std::string_view local_id) const;
  friend bool operator==(const WorkRecord&, const WorkRecord&) = default;
};

/// The unique headword-tagged title for lang, if any.
std::optional<TitleEntry> canonical_headword(const WorkRecord& record, std::string_view lang);

/// Collapses whitespace runs to single spaces and trims both ends.
std::string normalize_space(std::string_view text);

/// Splits a space-separated attribute value into tokens.
std::vector<std::string> split_tokens(std::string_view text);

}  // namespace workauth
