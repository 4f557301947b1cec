#pragma once

#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "workauth/model.hpp"
#include "workauth/namespaces.hpp"

namespace workauth::rdf {

struct Iri {
  std::string value;

  friend bool operator==(const Iri&, const Iri&) = default;
  friend auto operator<=>(const Iri&, const Iri&) = default;
};

struct Literal {
  std::string lexical;
  std::optional<std::string> lang;

  friend bool operator==(const Literal&, const Literal&) = default;
  friend auto operator<=>(const Literal&, const Literal&) = default;
};

using Object = std::variant<Iri, Literal>;

struct Triple {
  std::string subject;
  std::string predicate;
  Object object;

  friend bool operator==(const Triple&, const Triple&) = default;
  friend auto operator<=>(const Triple&, const Triple&) = default;
};

enum class GraphFormat { ntriples, turtle };

/// Class and property CURIEs used by the record mapping.
inline constexpr std::string_view kConceptualWork = "lawd:ConceptualWork";
inline constexpr std::string_view kEmbodies = "lawd:embodies";
inline constexpr std::string_view kHasVersion = "syriaca:hasVersion";
inline constexpr std::string_view kHasRecension = "syriaca:hasRecension";
inline constexpr std::string_view kHasEmbodiedVersion = "syriaca:hasEmbodiedVersion";
inline constexpr std::string_view kHasEmbodiedRecension = "syriaca:hasEmbodiedRecension";

/// Resolves a relation reference: "#id" against the record URI, anything
/// else must already be an absolute IRI. Throws Error("POINTER_UNRESOLVED")
/// when the local id is not a witness of the record.
std::string resolve_reference(const WorkRecord& record, const Reference& ref);

/// Full subjects x objects cross product per relation, document order,
/// subjects-major. Throws UNBOUND_PREFIX or POINTER_UNRESOLVED.
std::vector<Triple> relations_to_triples(const WorkRecord& record, const NamespaceTable& ns);

/// Identity, titles, creators, headwords, concordance idnos, then relations.
std::vector<Triple> record_to_triples(const WorkRecord& record, const NamespaceTable& ns);

std::string serialize_graph(const std::vector<Triple>& triples, GraphFormat format,
                            const NamespaceTable& ns = NamespaceTable::defaults());

std::string escape_literal(std::string_view text);

/// Splits one embodied relation out into an intermediate work.
struct Expansion {
  WorkRecord updated;
  WorkRecord created;
};

/// Replaces the relation identified by relation_id (hasEmbodiedVersion or
/// hasEmbodiedRecension) with hasVersion/hasRecension to new_uri, and builds
/// the new_uri record that carries the embodied witnesses via lawd:embodies.
/// Errors: NOT_EMBODIED (wrong predicate), NOT_FOUND (no such relation),
/// URI_COLLISION (new_uri equals the record or is reported taken).
Expansion expand_embodied_relation(const WorkRecord& record, std::string_view relation_id,
                                   const EntityUri& new_uri,
                                   const std::function<bool(const EntityUri&)>& is_taken = {});

}  // namespace workauth::rdf
