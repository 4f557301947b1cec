// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fail.

#include <httplib.h>

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <set>
#include <sstream>
#include <thread>

#include "support/fixtures.hpp"
#include "support/generators.hpp"
#include "support/oracles.hpp"
#include "support/plain.hpp"
#include "workauth/linkage.hpp"
#include "workauth/rdf.hpp"
#include "workauth/registry.hpp"
#include "workauth/service.hpp"
#include "workauth/tei.hpp"
#include "workauth/validate.hpp"

using namespace workauth;
using namespace workauth::testing;
using Clock = std::chrono::steady_clock;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string fmt(double value, int digits = 3) {
  std::ostringstream out;
  out.precision(digits);
  out << std::fixed << value;
  return out.str();
}

/// Collects mismatches by name so the detail line can say what differed.
struct Checks {
  std::size_t total = 0;
  std::vector<std::string> failed;

  void operator()(const std::string& name, bool ok) {
    ++total;
    if (!ok) failed.push_back(name);
  }
  std::string summary() const {
    std::string out = std::to_string(total - failed.size()) + "/" + std::to_string(total) + " exact";
    for (const auto& f : failed) out += " !" + f;
    return out;
  }
};

Outcome template_fidelity() {
  auto start = Clock::now();
  auto r = parse_work_record(read_fixture("valid/work-270.xml"));
  Checks check;
  check("uri", r.uri.render() == "http://syriaca.org/work/270");
  check("idnos", r.idnos == std::vector<IdnoEntry>{{"URI", "http://syriaca.org/work/270"}, {"BHS", "49"}, {"BHO", "772"}});
  const auto* bedjan = r.find_witness("bib270-4");
  check("bedjan", bedjan != nullptr);
  if (bedjan) {
    check("bedjan.class", bedjan->witness_class == "lawd:Edition");
    check("bedjan.ranges",
          bedjan->cited_ranges == std::vector<CitedRange>{{"volume", "2", "2", "2"}, {"pp", "260", "275", "260-275"}});
  }
  const auto* berlin = r.find_witness("bib270-6");
  check("berlin", berlin != nullptr && berlin->ms_identifier && berlin->locus);
  if (berlin && berlin->ms_identifier && berlin->locus) {
    check("berlin.collection", berlin->ms_identifier->collection == "Königliche Bibliothek");
    check("berlin.shelfmark", berlin->ms_identifier->alt_idnos == std::vector<IdnoEntry>{{"KB-Shelfmark", "or. oct. 1257"}});
    check("berlin.ms", berlin->ms_identifier->uri.render() == "http://syriaca.org/manuscript/20001");
    check("berlin.locus", berlin->locus->from == "1" && berlin->locus->to == "23");
    check("berlin.part", berlin->locus->part_uri &&
                             berlin->locus->part_uri->render() == "http://syriaca.org/manuscript/20001#a1");
  }
  auto elapsed = seconds_since(start);
  check("time<1s", elapsed < 1.0);
  return {check.failed.empty(), check.summary() + ", " + fmt(elapsed * 1000, 1) + " ms (limit 1 s)"};
}

Outcome triple_expansion() {
  auto text = read_fixture("valid/work-270.xml");
  auto r = parse_work_record(text);
  auto triples = rdf::relations_to_triples(r, NamespaceTable::defaults());
  std::vector<PlainTriple> ours;
  for (const auto& t : triples) ours.push_back(to_plain(t));
  auto oracle = brute_force_relation_triples(text, r.uri.render());
  bool embodies = false;
  for (const auto& t : triples) embodies |= t.predicate == "http://lawd.info/ontology/embodies";
  bool pass = triples.size() == 10 && ours == oracle && embodies;
  return {pass, std::to_string(triples.size()) + " triples (expected 10), oracle " +
                    (ours == oracle ? "agrees" : "DIFFERS") + " (" + std::to_string(oracle.size()) +
                    "), lawd:embodies -> http://lawd.info/ontology/embodies " + (embodies ? "yes" : "no")};
}

Outcome round_trip() {
  constexpr std::size_t kRecords = 500;
  auto start = Clock::now();
  Rng rng(20240501);
  std::size_t ok = 0;
  for (std::uint64_t id = 1; id <= kRecords; ++id) {
    auto r = random_record(rng, id);
    auto first = serialize_work_record(r);
    auto second = serialize_work_record(r);
    auto back = parse_work_record(first);
    if (back == r && first == second && serialize_work_record(back) == first) ++ok;
  }
  auto elapsed = seconds_since(start);
  bool pass = ok == kRecords && elapsed < 30.0;
  return {pass, std::to_string(ok) + "/" + std::to_string(kRecords) + " records identical and byte-stable, " +
                    fmt(elapsed) + " s (limit 30 s)"};
}

Outcome validator_suite() {
  enum Fault { dup_headword, missing_uri, unresolved_ptr, reversed_range, syc_tag, kFaults };
  const char* expected_code[] = {"HEADWORD_DUP", "MODEL_NO_URI", "PTR_UNRESOLVED", "RANGE_REVERSED", "LANG_SYC"};
  Rng rng(4242);
  std::size_t clean = 0, injected = 0, false_pos = 0, false_neg = 0;
  for (std::uint64_t id = 1; id <= 400; ++id) {
    auto r = random_record(rng, id);
    if (id % 2 == 1) {
      ++clean;
      // clean records also go through the file path
      auto text = serialize_work_record(r);
      auto report = validate_record(parse_work_record(text));
      report.append(validate_subject_codes(r));
      if (!report.items.empty()) ++false_pos;
      continue;
    }
    auto fault = static_cast<Fault>((id / 2) % kFaults);
    ++injected;
    switch (fault) {
      case dup_headword: {
        TitleEntry t;
        t.local_id = "inj-title";
        t.lang = "en";
        t.text = InlineText::plain("Injected headword");
        t.tags = {std::string(kHeadwordTag)};
        r.titles.push_back(t);
        t.local_id = "inj-title-2";
        r.titles.push_back(t);
        break;
      }
      case missing_uri:
        std::erase_if(r.idnos, [](const IdnoEntry& i) { return i.scheme == "URI"; });
        break;
      case unresolved_ptr:
        r.titles.front().sources.push_back(LocalPointer{"inj-missing"});
        break;
      case reversed_range: {
        BiblWitness w;
        w.local_id = "inj-wit";
        w.witness_class = "lawd:Edition";
        w.record_ptr = EntityUri::parse("http://syriaca.org/bibl/1");
        w.cited_ranges = {{"pp", "20", "10", "20-10"}};
        r.witnesses.push_back(w);
        break;
      }
      case syc_tag:
        r.text_lang = TextLang{"syc", "Classical Syriac", {}};
        break;
      default: break;
    }
    auto report = validate_record(r);
    if (!report.has_code(expected_code[fault])) ++false_neg;
  }
  bool pass = false_pos == 0 && false_neg == 0;
  return {pass, std::to_string(injected) + " injected faults (5 kinds), " + std::to_string(clean) +
                    " clean records: false negatives " + std::to_string(false_neg) + ", false positives " +
                    std::to_string(false_pos)};
}

Outcome directionality_lint() {
  constexpr int kTrials = 150;
  Rng rng(777);
  int agree = 0;
  std::size_t violations = 0, max_size = 0;
  for (int trial = 0; trial < kTrials; ++trial) {
    auto corpus = random_relation_corpus(rng, 20);
    max_size = std::max(max_size, corpus.size());
    std::set<std::tuple<std::string, std::string, std::string, std::string>> got;
    for (const auto& v : lint_corpus_directionality(corpus))
      got.emplace(std::string(to_string(v.issue)), v.a, v.b, v.predicate);
    violations += got.size();
    if (got == brute_force_direction_scan(corpus)) ++agree;
  }
  bool pass = agree == kTrials && max_size <= 20;
  return {pass, std::to_string(agree) + "/" + std::to_string(kTrials) + " trials agree with the all-pairs scan (corpora <= " +
                    std::to_string(max_size) + " records, " + std::to_string(violations) + " violations total)"};
}

Outcome linkage_quality() {
  auto start = Clock::now();
  Rng rng(60200);
  auto labeled = perturbed_stubs(rng, 60, 200);
  std::vector<linkage::LinkItem> items;
  std::map<std::string, std::size_t> seed_of;
  for (const auto& l : labeled) {
    items.push_back(linkage::make_item(l.stub));
    seed_of[l.stub.stub_id] = l.seed;
  }
  auto candidates = linkage::link(items);

  std::size_t true_pairs = 0;
  for (std::size_t i = 0; i < labeled.size(); ++i)
    for (std::size_t j = i + 1; j < labeled.size(); ++j) true_pairs += labeled[i].seed == labeled[j].seed;
  std::size_t auto_total = 0, auto_true = 0, found = 0;
  for (const auto& c : candidates) {
    bool same = seed_of.at(c.left) == seed_of.at(c.right);
    if (c.band == linkage::Band::auto_merge) {
      ++auto_total;
      auto_true += same;
    }
    if (c.band != linkage::Band::reject && same) ++found;
  }
  double precision = auto_total ? static_cast<double>(auto_true) / auto_total : 0.0;
  double recall = true_pairs ? static_cast<double>(found) / true_pairs : 0.0;

  auto serial = linkage::candidate_pairs_serial(items);
  linkage::score_candidates_serial(serial, items);
  Rng again(60200);
  auto labeled_again = perturbed_stubs(again, 60, 200);
  std::vector<linkage::LinkItem> items_again;
  for (const auto& l : labeled_again) items_again.push_back(linkage::make_item(l.stub));
  bool deterministic = linkage::link(items_again) == candidates && serial == candidates;
  auto elapsed = seconds_since(start);

  bool pass = auto_total > 0 && precision >= 0.95 && recall >= 0.90 && deterministic && elapsed < 10.0;
  return {pass, "auto precision " + fmt(precision) + " (" + std::to_string(auto_true) + "/" +
                    std::to_string(auto_total) + ", min 0.95), auto+review recall " + fmt(recall) + " (" +
                    std::to_string(found) + "/" + std::to_string(true_pairs) + ", min 0.90), " +
                    (deterministic ? "deterministic" : "NOT deterministic") + ", " + fmt(elapsed) + " s (limit 10 s)"};
}

Outcome expand_contract() {
  constexpr int kTrials = 150;
  Rng rng(9001);
  const auto ns = NamespaceTable::defaults();
  int equal = 0;
  for (int trial = 1; trial <= kTrials; ++trial) {
    std::vector<std::string> ids;
    auto r = random_embodied_record(rng, static_cast<std::uint64_t>(trial), ids);
    auto target = EntityUri{EntityKind::work, 900000 + static_cast<std::uint64_t>(trial), std::nullopt};
    auto x = rdf::expand_embodied_relation(r, ids[rng() % ids.size()], target);
    // both halves must survive storage before contraction
    auto updated = parse_work_record(serialize_work_record(x.updated));
    auto created = parse_work_record(serialize_work_record(x.created));
    auto combined = to_plain(rdf::record_to_triples(updated, ns));
    auto extra = to_plain(rdf::record_to_triples(created, ns));
    combined.insert(extra.begin(), extra.end());
    if (contract_expansion(combined, r.uri.render(), target.render()) == to_plain(rdf::record_to_triples(r, ns))) ++equal;
  }
  return {equal == kTrials, std::to_string(equal) + "/" + std::to_string(kTrials) + " trials restore the original triple set"};
}

Outcome service() {
  auto root = seeded_registry("acceptance-service");
  Registry registry(root);
  Service svc(registry);
  httplib::Server server;
  svc.mount(server);
  int port = server.bind_to_any_port("127.0.0.1");
  if (port <= 0) return {false, "could not bind a local port"};
  std::thread listener([&] { server.listen_after_bind(); });
  server.wait_until_ready();

  Checks check;
  constexpr int kClients = 4;
  constexpr int kPerClient = 25;
  std::vector<std::vector<std::uint64_t>> minted(kClients);
  std::vector<std::thread> clients;
  for (int c = 0; c < kClients; ++c) {
    clients.emplace_back([&, c] {
      httplib::Client client("127.0.0.1", port);
      for (int i = 0; i < kPerClient; ++i) {
        auto res = client.Post("/api/mint", R"({"kind":"work"})", "application/json");
        if (!res || res->status != 201) return;
        auto uri = EntityUri::parse(nlohmann::json::parse(res->body).at("uri").get<std::string>());
        minted[static_cast<std::size_t>(c)].push_back(uri.id);
        client.Get("/api/search?title=Angel");
      }
    });
  }
  for (auto& t : clients) t.join();
  std::set<std::uint64_t> unique;
  bool increasing = true;
  std::size_t count = 0;
  for (const auto& ids : minted) {
    increasing &= std::is_sorted(ids.begin(), ids.end()) && std::adjacent_find(ids.begin(), ids.end()) == ids.end();
    unique.insert(ids.begin(), ids.end());
    count += ids.size();
  }
  check("100 mints", count == kClients * kPerClient);
  check("unique", unique.size() == count);
  check("increasing", increasing && !unique.empty() && *unique.begin() >= 271);

  httplib::Client client("127.0.0.1", port);
  auto work = client.Get("/api/work/270?format=tei");
  check("work/270", work && work->status == 200 &&
                        parse_work_record(work->body) == parse_work_record(read_fixture("valid/work-270.xml")));
  auto work_json = client.Get("/api/work/270");
  check("work/270 json", work_json && work_json->status == 200 &&
                             nlohmann::json::parse(work_json->body)["uri"] == "http://syriaca.org/work/270");
  auto idno = client.Get("/api/idno/BHS/49");
  check("BHS 49", idno && idno->status == 303 &&
                      nlohmann::json::parse(idno->body)["uri"] == "http://syriaca.org/work/270");
  server.stop();
  listener.join();

  auto fresh = parse_work_record(read_fixture("valid/work-0.xml"));
  fresh.uri = EntityUri{EntityKind::work, *unique.rbegin(), std::nullopt};
  fresh.idnos = {{"URI", fresh.uri.render()}, {"CPG", "9000"}};
  registry.put(fresh);
  check("index rebuild", Registry::rebuild_index(root) == registry.index());
  return {check.failed.empty(), check.summary() + " (" + std::to_string(count) + " interleaved mints over " +
                                    std::to_string(kClients) + " HTTP clients, ids " +
                                    (unique.empty() ? std::string("none")
                                                    : std::to_string(*unique.begin()) + ".." +
                                                          std::to_string(*unique.rbegin())) +
                                    ")"};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"template-fidelity", template_fidelity},
      {"triple-expansion", triple_expansion},
      {"round-trip", round_trip},
      {"validator-suite", validator_suite},
      {"directionality-lint", directionality_lint},
      {"linkage-quality", linkage_quality},
      {"expand-contract", expand_contract},
      {"service", service},
  };
  int failures = 0;
  for (const auto& [name, run] : criteria) {
    Outcome o;
    try {
      o = run();
    } catch (const std::exception& e) {
      o = {false, std::string("threw: ") + e.what()};
    }
    failures += !o.pass;
    std::cout << (o.pass ? "PASS " : "FAIL ") << name << ": " << o.detail << std::endl;
  }
  std::cout << (criteria.size() - static_cast<std::size_t>(failures)) << "/" << criteria.size() << " criteria passed"
            << std::endl;
  return failures == 0 ? 0 : 1;
}
