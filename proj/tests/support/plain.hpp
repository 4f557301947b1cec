#pragma once

#include <vector>

#include "support/oracles.hpp"
#include "workauth/rdf.hpp"

namespace workauth::testing {

inline PlainTriple to_plain(const rdf::Triple& t) {
  if (const auto* iri = std::get_if<rdf::Iri>(&t.object)) return {t.subject, t.predicate, iri->value, false, ""};
  const auto& lit = std::get<rdf::Literal>(t.object);
  return {t.subject, t.predicate, lit.lexical, true, lit.lang.value_or("")};
}

inline TripleSet to_plain(const std::vector<rdf::Triple>& triples) {
  TripleSet out;
  for (const auto& t : triples) out.insert(to_plain(t));
  return out;
}

}  // namespace workauth::testing
