#include "workauth/namespaces.hpp"

#include <fstream>
#include <sstream>

#include "workauth/config.hpp"
#include "workauth/error.hpp"

namespace workauth {

NamespaceTable NamespaceTable::defaults() {
  NamespaceTable t;
  t.bind("lawd", "http://lawd.info/ontology/");
  t.bind("bf", "http://bibframe.org/vocab/");
  t.bind("dct", "http://purl.org/dc/terms/");
  t.bind("syriaca", "http://syriaca.org/schema#");
  t.bind("rdf", "http://www.w3.org/1999/02/22-rdf-syntax-ns#");
  t.bind("frbr", "http://purl.org/vocab/frbr/core#");
  t.bind("rdac", "http://rdaregistry.info/Elements/c/");
  t.bind("rdam", "http://www.rdaregistry.info/Elements/m/");
  t.bind("rdaw", "http://rdaregistry.info/Elements/w/");
  t.bind("rdrel", "http://RDVocab.info/RDARelationshipsWEMI/");
  t.bind("schema", "http://schema.org/");
  return t;
}

NamespaceTable NamespaceTable::load(const std::filesystem::path& path) {
  auto config = Config::load(path);
  auto table = defaults();
  for (const auto& [key, value] : config.entries()) {
    std::string_view prefix = key;
    if (prefix.starts_with("ns.")) prefix.remove_prefix(3);
    else if (prefix.find('.') != std::string_view::npos) continue;
    table.bind(std::string(prefix), value);
  }
  return table;
}

void NamespaceTable::bind(std::string prefix, std::string base) {
  bindings_[std::move(prefix)] = std::move(base);
}

std::optional<std::string_view> NamespaceTable::lookup(std::string_view prefix) const {
  auto it = bindings_.find(std::string(prefix));
  if (it == bindings_.end()) return std::nullopt;
  return std::string_view(it->second);
}

std::optional<std::pair<std::string_view, std::string_view>> split_curie(std::string_view curie) {
  auto colon = curie.find(':');
  if (colon == std::string_view::npos || colon == 0) return std::nullopt;
  return std::pair{curie.substr(0, colon), curie.substr(colon + 1)};
}

std::string expand_curie(std::string_view curie, const NamespaceTable& ns) {
  auto parts = split_curie(curie);
  if (!parts) throw Error("CURIE_INVALID", "not a CURIE: '" + std::string(curie) + "'");
  auto base = ns.lookup(parts->first);
  if (!base) throw Error("UNBOUND_PREFIX", "unbound prefix '" + std::string(parts->first) + "'");
  return std::string(*base) + std::string(parts->second);
}

}  // namespace workauth
