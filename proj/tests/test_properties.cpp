#include "doctest.h"

#include "support/generators.hpp"
#include "support/oracles.hpp"
#include "support/plain.hpp"
#include "workauth/json.hpp"
#include "workauth/linkage.hpp"
#include "workauth/rdf.hpp"
#include "workauth/tei.hpp"
#include "workauth/validate.hpp"

using namespace workauth;
using namespace workauth::testing;

namespace {

const auto ns = NamespaceTable::defaults();

}  // namespace

TEST_CASE("generated records are valid and round trip") {
  Rng rng(101);
  for (std::uint64_t id = 1; id <= 200; ++id) {
    auto r = random_record(rng, id);
    CAPTURE(id);
    REQUIRE(validate_record(r).valid());
    auto text = serialize_work_record(r);
    auto back = parse_work_record(text);
    CHECK(back == r);
    CHECK(serialize_work_record(back) == text);
  }
}

TEST_CASE("headwords are unique per language in valid records") {
  Rng rng(102);
  for (std::uint64_t id = 1; id <= 200; ++id) {
    auto r = random_record(rng, id);
    std::map<std::string, int> count;
    for (const auto& t : r.titles)
      if (t.is_headword()) ++count[t.lang];
    for (const auto& [lang, n] : count) CHECK(n <= 1);
    // forcing a second headword in the same language is always caught
    if (!count.empty()) {
      auto lang = count.begin()->first;
      TitleEntry dup;
      dup.local_id = "dup-title";
      dup.lang = lang;
      dup.text = InlineText::plain("Duplicate");
      dup.tags = {std::string(kHeadwordTag)};
      r.titles.push_back(dup);
      CHECK(validate_record(r).has_code("HEADWORD_DUP"));
    }
  }
}

TEST_CASE("validation is pure") {
  Rng rng(103);
  for (std::uint64_t id = 1; id <= 100; ++id) {
    auto r = random_record(rng, id);
    r.titles.emplace_back();
    r.relations.emplace_back();
    auto a = validate_record(r);
    auto b = validate_record(r);
    CHECK(a == b);
    CHECK(to_json(a).dump() == to_json(b).dump());
  }
}

TEST_CASE("relation triples match the raw-text expander") {
  Rng rng(104);
  for (std::uint64_t id = 1; id <= 200; ++id) {
    auto r = random_record(rng, id);
    std::vector<PlainTriple> ours;
    for (const auto& t : rdf::relations_to_triples(r, ns)) ours.push_back(to_plain(t));
    CHECK(ours == brute_force_relation_triples(serialize_work_record(r), r.uri.render()));
  }
}

TEST_CASE("graph serializations parse back to the same triples") {
  Rng rng(105);
  for (std::uint64_t id = 1; id <= 150; ++id) {
    auto triples = rdf::record_to_triples(random_record(rng, id), ns);
    auto expected = to_plain(triples);
    std::size_t nt_count = 0;
    std::size_t ttl_count = 0;
    CHECK(read_ntriples(rdf::serialize_graph(triples, rdf::GraphFormat::ntriples), &nt_count) == expected);
    CHECK(read_turtle(rdf::serialize_graph(triples, rdf::GraphFormat::turtle), &ttl_count) == expected);
    CHECK(nt_count == triples.size());
    CHECK(ttl_count == triples.size());
  }
}

TEST_CASE("EntityUri survives render and parse") {
  Rng rng(106);
  for (std::uint64_t id = 1; id <= 100; ++id) {
    auto r = random_record(rng, id);
    CHECK(EntityUri::parse(r.uri.render()) == r.uri);
    for (const auto& w : r.witnesses) {
      if (w.record_ptr) CHECK(EntityUri::parse(w.record_ptr->render()) == *w.record_ptr);
      if (w.ms_identifier) CHECK(EntityUri::parse(w.ms_identifier->uri.render()) == w.ms_identifier->uri);
    }
  }
}

TEST_CASE("expand then contract restores the triple set") {
  Rng rng(107);
  for (std::uint64_t trial = 1; trial <= 60; ++trial) {
    std::vector<std::string> ids;
    auto r = random_embodied_record(rng, trial, ids);
    REQUIRE_FALSE(ids.empty());
    auto target = EntityUri{EntityKind::work, 100000 + trial, std::nullopt};
    auto x = rdf::expand_embodied_relation(r, ids[rng() % ids.size()], target);
    CHECK(validate_record(x.updated).valid());
    CHECK(validate_record(x.created).valid());
    auto combined = to_plain(rdf::record_to_triples(x.updated, ns));
    auto created = to_plain(rdf::record_to_triples(x.created, ns));
    combined.insert(created.begin(), created.end());
    CHECK(contract_expansion(combined, r.uri.render(), target.render()) == to_plain(rdf::record_to_triples(r, ns)));
  }
}

TEST_CASE("merged clusters are valid records") {
  Rng rng(108);
  auto labeled = perturbed_stubs(rng, 20, 80);
  std::map<std::size_t, std::vector<linkage::WorkStub>> by_seed;
  for (const auto& l : labeled) by_seed[l.seed].push_back(l.stub);
  std::uint64_t next = 5000;
  for (const auto& [seed, stubs] : by_seed) {
    auto r = linkage::merge_cluster(stubs, EntityUri{EntityKind::work, next++, std::nullopt});
    CAPTURE(seed);
    CHECK(validate_record(r).valid());
    CHECK(parse_work_record(serialize_work_record(r)) == r);
    std::size_t ms = 0;
    for (const auto& w : r.witnesses) ms += w.is_manuscript();
    CHECK(ms == stubs.size());
  }
}

TEST_CASE("linkage is deterministic and order independent") {
  Rng rng(109);
  auto labeled = perturbed_stubs(rng, 30, 100);
  std::vector<linkage::LinkItem> items;
  for (const auto& l : labeled) items.push_back(linkage::make_item(l.stub));
  auto first = linkage::link(items);
  CHECK(linkage::link(items) == first);
  std::shuffle(items.begin(), items.end(), rng);
  CHECK(linkage::link(items) == first);
  for (const auto& c : first) {
    CHECK(c.left < c.right);
    CHECK(c.score >= 0.0);
    CHECK(c.score <= 1.0);
    CHECK(c.band == linkage::classify_candidate(c.score));
  }
}
