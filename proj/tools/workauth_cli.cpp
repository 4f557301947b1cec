// workauth: command-line front end for the work authority toolkit.

#include <httplib.h>

#include <CLI11.hpp>
#include <csignal>
#include <fstream>
#include <iostream>
#include <map>
#include <set>
#include <sstream>

#include "workauth/batch.hpp"
#include "workauth/config.hpp"
#include "workauth/error.hpp"
#include "workauth/json.hpp"
#include "workauth/linkage.hpp"
#include "workauth/linkage_io.hpp"
#include "workauth/rdf.hpp"
#include "workauth/registry.hpp"
#include "workauth/service.hpp"
#include "workauth/tei.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace workauth;

namespace {

enum Exit { kOk = 0, kInvalid = 1, kUsage = 2 };

struct Globals {
  bool json = false;
  std::string config_path;
  Config config;
  NamespaceTable ns = NamespaceTable::defaults();
  Taxonomy taxonomy = Taxonomy::builtin();
};

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("IO_ERROR", "cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<fs::path> as_paths(const std::vector<std::string>& in) { return {in.begin(), in.end()}; }

void print_json(const json& j) { std::cout << j.dump(2) << "\n"; }

/// Records from registry roots, directories or files. Invalid files abort.
std::vector<WorkRecord> load_corpus(const std::vector<std::string>& inputs, const Globals& g) {
  std::vector<fs::path> paths;
  for (const auto& in : inputs) {
    fs::path p(in);
    paths.push_back(fs::is_directory(p / "works") ? p / "works" : p);
  }
  std::vector<WorkRecord> out;
  for (auto& outcome : load_records(expand_inputs(paths), g.ns, g.taxonomy)) {
    if (!outcome.record)
      throw Error("CORPUS_INVALID", outcome.path.string() + ": " + outcome.report.items.front().message);
    out.push_back(std::move(*outcome.record));
  }
  return out;
}

// ------------------------------------------------------------ validate

int cmd_validate(const Globals& g, const std::vector<std::string>& inputs, bool strict) {
  auto outcomes = load_records(expand_inputs(as_paths(inputs)), g.ns, g.taxonomy);
  int status = kOk;
  json rows = json::array();
  for (auto& o : outcomes) {
    if (strict) o.report.promote_warnings();
    if (o.io_error) status = kUsage;
    else if (!o.report.valid() && status == kOk) status = kInvalid;
    if (g.json) {
      auto j = to_json(o.report);
      j["file"] = o.path.string();
      rows.push_back(std::move(j));
      continue;
    }
    if (o.report.items.empty()) std::cout << o.path.string() << ": ok\n";
    for (const auto& item : o.report.items) {
      std::cout << o.path.string() << ": " << to_string(item.severity) << " " << item.code;
      if (!item.path.empty()) std::cout << " " << item.path;
      std::cout << ": " << item.message << "\n";
    }
  }
  if (g.json) print_json(rows);
  return status;
}

// ------------------------------------------------------------ convert

int cmd_convert(const Globals& g, const std::vector<std::string>& inputs, const std::string& to,
                const std::string& out, bool merge) {
  auto files = expand_inputs(as_paths(inputs));
  if (files.empty()) return kOk;
  auto outcomes = load_records(files, g.ns, g.taxonomy);
  bool failed = false;
  for (const auto& o : outcomes) {
    if (o.io_error) throw Error("IO_ERROR", "cannot read " + o.path.string());
    if (!o.report.valid()) {
      failed = true;
      for (const auto& item : o.report.items)
        if (item.severity == Severity::error)
          std::cerr << o.path.string() << ": " << item.code << " " << item.path << ": " << item.message << "\n";
    }
  }
  const auto format = to == "ttl" ? rdf::GraphFormat::turtle : rdf::GraphFormat::ntriples;
  const std::string ext = to == "json" ? ".json" : to == "ttl" ? ".ttl" : ".nt";
  auto render = [&](const std::vector<const WorkRecord*>& records) {
    if (to == "json") {
      if (records.size() == 1 && !merge) return to_json(*records.front()).dump(2) + "\n";
      json arr = json::array();
      for (const auto* r : records) arr.push_back(to_json(*r));
      return arr.dump(2) + "\n";
    }
    std::vector<rdf::Triple> triples;
    for (const auto* r : records) {
      auto t = rdf::record_to_triples(*r, g.ns);
      triples.insert(triples.end(), t.begin(), t.end());
    }
    return rdf::serialize_graph(triples, format, g.ns);
  };

  json written = json::array();
  if (merge) {
    if (failed) return kInvalid;
    std::vector<const WorkRecord*> records;
    for (const auto& o : outcomes) records.push_back(&*o.record);
    fs::path target(out);
    if (target.has_parent_path()) fs::create_directories(target.parent_path());
    write_file_atomic(target, render(records));
    written.push_back(target.string());
  } else {
    fs::create_directories(out);
    for (const auto& o : outcomes) {
      if (!o.report.valid()) continue;
      auto target = fs::path(out) / (o.path.stem().string() + ext);
      write_file_atomic(target, render({&*o.record}));
      written.push_back(target.string());
    }
  }
  if (g.json) print_json({{"written", written}, {"failed", failed}});
  else
    for (const auto& w : written) std::cout << "wrote " << w.get<std::string>() << "\n";
  return failed ? kInvalid : kOk;
}

// ------------------------------------------------------------ lint-corpus

int cmd_lint(const Globals& g, const std::vector<std::string>& inputs) {
  auto corpus = load_corpus(inputs, g);
  auto violations = lint_corpus_directionality(corpus, g.ns, default_inverse_pairs(g.ns));
  if (g.json) {
    json rows = json::array();
    for (const auto& v : violations)
      rows.push_back({{"issue", std::string(to_string(v.issue))}, {"a", v.a}, {"b", v.b}, {"predicate", v.predicate}});
    print_json({{"records", corpus.size()}, {"violations", rows}});
  } else {
    for (const auto& v : violations) std::cout << to_string(v.issue) << " " << v.a << " " << v.b << " " << v.predicate << "\n";
    std::cout << corpus.size() << " records, " << violations.size() << " violations\n";
  }
  return violations.empty() ? kOk : kInvalid;
}

// ------------------------------------------------------------ link

struct LinkOptions {
  std::vector<std::string> catalogues;
  std::vector<std::string> corpus;
  std::string out;
  std::optional<double> auto_threshold;
  std::optional<double> review_threshold;
};

int cmd_link(const Globals& g, const LinkOptions& opt) {
  auto thresholds = g.config.thresholds();
  if (opt.auto_threshold) thresholds.auto_merge = *opt.auto_threshold;
  if (opt.review_threshold) thresholds.review = *opt.review_threshold;
  thresholds.check();

  std::vector<linkage::WorkStub> stubs;
  std::size_t warnings = 0;
  for (const auto& path : opt.catalogues) {
    auto result = linkage::ingest_catalogue_entries(read_file(path));
    for (const auto& w : result.warnings) std::cerr << path << ": item " << w.item_index << ": " << w.message << "\n";
    warnings += result.warnings.size();
    std::move(result.stubs.begin(), result.stubs.end(), std::back_inserter(stubs));
  }
  auto corpus = load_corpus(opt.corpus, g);

  std::vector<linkage::LinkItem> items;
  for (const auto& s : stubs) items.push_back(linkage::make_item(s));
  for (const auto& r : corpus) items.push_back(linkage::make_item(r));
  auto candidates = linkage::link(items, g.config.weights(), thresholds);

  fs::create_directories(opt.out);
  std::vector<json> stub_rows, candidate_rows;
  for (const auto& s : stubs) stub_rows.push_back(linkage::to_json(s));
  for (const auto& c : candidates) candidate_rows.push_back(linkage::to_json(c));
  write_file_atomic(fs::path(opt.out) / "stubs.jsonl", linkage::to_jsonl(stub_rows));
  write_file_atomic(fs::path(opt.out) / "candidates.jsonl", linkage::to_jsonl(candidate_rows));

  std::map<linkage::Band, std::size_t> per_band;
  for (const auto& c : candidates) ++per_band[c.band];
  json summary{{"stubs", stubs.size()},
               {"records", corpus.size()},
               {"candidates", candidates.size()},
               {"auto", per_band[linkage::Band::auto_merge]},
               {"review", per_band[linkage::Band::review]},
               {"reject", per_band[linkage::Band::reject]},
               {"warnings", warnings}};
  if (g.json) print_json(summary);
  else
    std::cout << stubs.size() << " stubs, " << corpus.size() << " records, " << candidates.size() << " candidates ("
              << summary["auto"] << " auto, " << summary["review"] << " review, " << summary["reject"] << " reject)\n";
  return kOk;
}

// ------------------------------------------------------------ apply-decisions

struct ApplyOptions {
  std::string candidates;
  std::string decisions;
  std::string stubs;
  std::vector<std::string> corpus;
  std::string out;
  std::uint64_t first_id = 0;
};

int cmd_apply(const Globals& g, const ApplyOptions& opt) {
  auto candidates = linkage::read_jsonl_as<linkage::MatchCandidate>(opt.candidates, linkage::candidate_from_json);
  std::vector<linkage::MatchDecision> decisions;
  if (!opt.decisions.empty() && fs::exists(opt.decisions))
    decisions = linkage::read_jsonl_as<linkage::MatchDecision>(opt.decisions, linkage::decision_from_json);
  else if (!opt.decisions.empty())
    throw Error("IO_ERROR", "cannot read " + opt.decisions);
  std::vector<linkage::WorkStub> stubs;
  if (!opt.stubs.empty()) stubs = linkage::read_jsonl_as<linkage::WorkStub>(opt.stubs, linkage::stub_from_json);
  auto corpus = load_corpus(opt.corpus, g);

  std::vector<std::string> ids;
  for (const auto& s : stubs) ids.push_back(s.stub_id);
  for (const auto& r : corpus) ids.push_back(r.uri.render());
  auto clusters = linkage::apply_decisions(ids, candidates, decisions);

  fs::create_directories(opt.out);
  std::vector<json> rows;
  for (const auto& c : clusters) rows.push_back(linkage::to_json(c));

  std::size_t merged = 0;
  if (!stubs.empty()) {
    std::map<std::string, const linkage::WorkStub*> stub_by_id;
    for (const auto& s : stubs) stub_by_id[s.stub_id] = &s;
    std::map<std::string, const WorkRecord*> record_by_id;
    std::uint64_t next = opt.first_id;
    for (const auto& r : corpus) {
      record_by_id[r.uri.render()] = &r;
      next = std::max(next, r.uri.id + 1);
    }
    if (next == 0) next = 1;
    fs::create_directories(fs::path(opt.out) / "works");
    for (std::size_t i = 0; i < clusters.size(); ++i) {
      std::vector<linkage::WorkStub> members;
      std::vector<WorkRecord> records;
      for (const auto& id : clusters[i].members) {
        if (auto s = stub_by_id.find(id); s != stub_by_id.end()) members.push_back(*s->second);
        else if (auto r = record_by_id.find(id); r != record_by_id.end()) records.push_back(*r->second);
      }
      if (members.empty() && records.size() < 2) continue;
      EntityUri uri{EntityKind::work, 0, std::nullopt};
      if (!records.empty()) {
        uri = records.front().uri;
        for (const auto& r : records) uri = std::min(uri, r.uri);
      } else {
        uri.id = next++;
      }
      auto record = linkage::merge_cluster(members, uri, records);
      write_file_atomic(Registry::record_path(opt.out, uri), serialize_work_record(record));
      rows[i]["work"] = uri.render();
      ++merged;
    }
  }
  write_file_atomic(fs::path(opt.out) / "clusters.jsonl", linkage::to_jsonl(rows));

  std::size_t multi = 0;
  for (const auto& c : clusters) multi += c.members.size() > 1;
  if (g.json) print_json({{"clusters", clusters.size()}, {"multi_member", multi}, {"merged_records", merged}});
  else std::cout << clusters.size() << " clusters (" << multi << " with several members), " << merged << " merged records\n";
  return kOk;
}

// ------------------------------------------------------------ merge

int cmd_merge(const Globals& g, const std::string& stubs_path, const std::vector<std::string>& members,
              const std::string& uri_text, const std::vector<std::string>& corpus_inputs, const std::string& out) {
  auto uri = EntityUri::parse(uri_text);
  auto stubs = linkage::read_jsonl_as<linkage::WorkStub>(stubs_path, linkage::stub_from_json);
  auto corpus = load_corpus(corpus_inputs, g);
  std::set<std::string> wanted(members.begin(), members.end());
  std::vector<linkage::WorkStub> chosen;
  std::vector<WorkRecord> records;
  for (const auto& s : stubs)
    if (wanted.erase(s.stub_id)) chosen.push_back(s);
  for (const auto& r : corpus)
    if (wanted.erase(r.uri.render())) records.push_back(r);
  if (!wanted.empty()) throw Error("NOT_FOUND", "unknown member '" + *wanted.begin() + "'");
  auto record = linkage::merge_cluster(chosen, uri, records);
  auto text = serialize_work_record(record);
  if (out.empty() || out == "-") std::cout << text;
  else write_file_atomic(out, text);
  return kOk;
}

// ------------------------------------------------------------ mint

int cmd_mint(const Globals& g, const std::string& data, const std::string& kind_name, unsigned count) {
  auto kind = entity_kind_from_string(kind_name);
  if (!kind) throw Error("USAGE", "unknown entity kind '" + kind_name + "'");
  Registry registry(data);
  json uris = json::array();
  for (unsigned i = 0; i < count; ++i) uris.push_back(registry.mint(*kind).render());
  if (g.json) print_json({{"uris", uris}});
  else
    for (const auto& u : uris) std::cout << u.get<std::string>() << "\n";
  return kOk;
}

// ------------------------------------------------------------ serve

httplib::Server* g_server = nullptr;

void stop_server(int) {
  if (g_server) g_server->stop();
}

int cmd_serve(const Globals& g, const std::string& data, const std::string& host, int port, const std::string& review) {
  if (!fs::is_directory(data)) throw Error("IO_ERROR", data + " is not a registry root");
  Registry registry(data);
  ServiceOptions options;
  options.ns = g.ns;
  options.taxonomy = &g.taxonomy;
  if (!review.empty()) options.review_dir = review;
  Service service(registry, options);
  httplib::Server server;
  service.mount(server);
  server.set_logger([](const httplib::Request& req, const httplib::Response& res) {
    std::cerr << req.method << " " << req.path << " " << res.status << "\n";
  });
  if (!server.bind_to_port(host, port)) {
    std::cerr << "error: cannot bind " << host << ":" << port << "\n";
    return kUsage;
  }
  g_server = &server;
  std::signal(SIGINT, stop_server);
  std::signal(SIGTERM, stop_server);
  std::cerr << "serving " << data << " on http://" << host << ":" << port << "\n";
  server.listen_after_bind();
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Authority-file toolkit for literary work records"};
  app.require_subcommand(1);
  Globals g;
  app.add_flag("--json", g.json, "Machine-readable output");
  app.add_option("--config", g.config_path, "key = value settings file")->check(CLI::ExistingFile);

  std::vector<std::string> inputs;
  bool strict = false;
  auto* validate = app.add_subcommand("validate", "Validate TEI work records");
  validate->add_option("paths", inputs, "Files or directories")->required();
  validate->add_flag("--strict", strict, "Treat warnings as errors");

  std::string to = "nt", out;
  bool merge = false;
  auto* convert = app.add_subcommand("convert", "Convert records to N-Triples, Turtle or JSON");
  convert->add_option("paths", inputs, "Files or directories");
  convert->add_option("--to", to, "Output format")->check(CLI::IsMember({"nt", "ttl", "json"}));
  convert->add_option("-o,--out", out, "Output directory (file with --merge)")->required();
  convert->add_flag("--merge", merge, "Write one combined output");

  auto* lint = app.add_subcommand("lint-corpus", "Check relationship directionality across a corpus");
  lint->add_option("paths", inputs, "Registry roots, directories or files")->required();

  LinkOptions link_opt;
  auto* link = app.add_subcommand("link", "Ingest catalogues and score candidate matches");
  link->add_option("--catalogue", link_opt.catalogues, "Catalogue XML file")->required()->check(CLI::ExistingFile);
  link->add_option("--corpus", link_opt.corpus, "Existing records (registry root or directory)");
  link->add_option("--out", link_opt.out, "Output directory")->required();
  link->add_option("--auto-threshold", link_opt.auto_threshold, "Auto-merge threshold");
  link->add_option("--review-threshold", link_opt.review_threshold, "Review threshold");

  ApplyOptions apply_opt;
  auto* apply = app.add_subcommand("apply-decisions", "Cluster candidates using editorial decisions");
  apply->add_option("--candidates", apply_opt.candidates, "candidates.jsonl")->required()->check(CLI::ExistingFile);
  apply->add_option("--decisions", apply_opt.decisions, "decisions.jsonl");
  apply->add_option("--stubs", apply_opt.stubs, "stubs.jsonl; enables merged record output")->check(CLI::ExistingFile);
  apply->add_option("--corpus", apply_opt.corpus, "Existing records (registry root or directory)");
  apply->add_option("--first-id", apply_opt.first_id, "First work id for new records");
  apply->add_option("--out", apply_opt.out, "Output directory")->required();

  std::string stubs_path, uri_text;
  std::vector<std::string> members, corpus;
  auto* merge_cmd = app.add_subcommand("merge", "Merge chosen stubs and records into one work");
  merge_cmd->add_option("--stubs", stubs_path, "stubs.jsonl")->required()->check(CLI::ExistingFile);
  merge_cmd->add_option("--member", members, "Stub id or work URI")->required();
  merge_cmd->add_option("--uri", uri_text, "URI of the merged work")->required();
  merge_cmd->add_option("--corpus", corpus, "Existing records");
  merge_cmd->add_option("-o,--out", out, "Output file (default stdout)");

  std::string data, kind = "work";
  unsigned count = 1;
  auto* mint = app.add_subcommand("mint", "Mint new URIs");
  mint->add_option("--data", data, "Registry root")->required();
  mint->add_option("--kind", kind, "Entity kind");
  mint->add_option("--count", count, "How many");

  std::string host = "127.0.0.1", review;
  int port = 8080;
  auto* serve = app.add_subcommand("serve", "Serve the HTTP API");
  serve->add_option("--data", data, "Registry root")->required();
  serve->add_option("--port", port, "TCP port");
  serve->add_option("--host", host, "Bind address");
  serve->add_option("--review", review, "Review directory (default {data}/review)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kOk : kUsage;
  }

  try {
    if (!g.config_path.empty()) {
      g.config = Config::load(g.config_path);
      g.ns = g.config.namespaces();
      if (auto path = g.config.get("taxonomy")) g.taxonomy = Taxonomy::load(*path);
    }
    if (*validate) return cmd_validate(g, inputs, strict);
    if (*convert) return cmd_convert(g, inputs, to, out, merge);
    if (*lint) return cmd_lint(g, inputs);
    if (*link) return cmd_link(g, link_opt);
    if (*apply) return cmd_apply(g, apply_opt);
    if (*merge_cmd) return cmd_merge(g, stubs_path, members, uri_text, corpus, out);
    if (*mint) return cmd_mint(g, data, kind, count);
    if (*serve) return cmd_serve(g, data, host, port, review);
  } catch (const RecordRejected& e) {
    std::cerr << "error: " << e.what() << "\n";
    for (const auto& item : e.report().items) std::cerr << "  " << item.code << " " << item.path << ": " << item.message << "\n";
    return kInvalid;
  } catch (const Error& e) {
    if (g.json) print_json({{"code", e.code()}, {"message", e.what()}});
    std::cerr << "error: " << e.code() << ": " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  }
  return kUsage;
}
