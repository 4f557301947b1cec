#include "workauth/service.hpp"

#include <httplib.h>

#include <algorithm>
#include <charconv>
#include <chrono>
#include <ctime>
#include <fstream>

#include "workauth/error.hpp"
#include "workauth/json.hpp"
#include "workauth/linkage_io.hpp"
#include "workauth/rdf.hpp"
#include "workauth/tei.hpp"

namespace workauth {

using nlohmann::json;

namespace {

HttpResponse json_response(int status, const json& body) {
  return {status, "application/json", body.dump(), {}};
}

HttpResponse error_response(int status, std::string code, std::string message) {
  return json_response(status, {{"code", std::move(code)}, {"message", std::move(message)}});
}

std::vector<std::string> split_path(std::string_view path) {
  std::vector<std::string> parts;
  std::size_t pos = 0;
  while (pos <= path.size()) {
    auto next = path.find('/', pos);
    if (next == std::string_view::npos) next = path.size();
    if (next > pos) parts.emplace_back(path.substr(pos, next - pos));
    pos = next + 1;
  }
  return parts;
}

std::optional<std::uint64_t> parse_uint(std::string_view text) {
  std::uint64_t v = 0;
  if (text.empty()) return std::nullopt;
  auto [p, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || p != text.data() + text.size()) return std::nullopt;
  return v;
}

struct Page {
  std::size_t limit = 50;
  std::size_t offset = 0;
};

Page page_of(const HttpRequest& request) {
  Page page;
  if (auto v = request.param("limit")) {
    auto n = parse_uint(*v);
    if (!n || *n == 0 || *n > 1000) throw Error("BAD_REQUEST", "limit must be between 1 and 1000");
    page.limit = static_cast<std::size_t>(*n);
  }
  if (auto v = request.param("offset")) {
    auto n = parse_uint(*v);
    if (!n) throw Error("BAD_REQUEST", "offset must be a non-negative integer");
    page.offset = static_cast<std::size_t>(*n);
  }
  return page;
}

json paged(const std::vector<json>& items, const Page& page) {
  json out = json::array();
  for (std::size_t i = page.offset; i < items.size() && i < page.offset + page.limit; ++i) out.push_back(items[i]);
  return {{"total", items.size()}, {"offset", page.offset}, {"limit", page.limit}, {"items", out}};
}

json lang_text(const linkage::LangText& t) { return {{"lang", t.lang}, {"text", t.text}}; }

template <typename T>
std::vector<T> read_optional_jsonl(const std::filesystem::path& path, T (*convert)(const json&)) {
  if (!std::filesystem::exists(path)) return {};
  return linkage::read_jsonl_as<T>(path, convert);
}

}  // namespace

std::optional<std::string> HttpRequest::param(const std::string& key) const {
  auto it = params.find(key);
  if (it == params.end()) return std::nullopt;
  return it->second;
}

std::string utc_now_iso8601() {
  auto now = std::chrono::system_clock::now();
  auto t = std::chrono::system_clock::to_time_t(now);
  auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(now.time_since_epoch()).count() % 1000;
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%S", &tm);
  char out[40];
  std::snprintf(out, sizeof out, "%s.%03dZ", buf, static_cast<int>(ms));
  return out;
}

Service::Service(Registry& registry, ServiceOptions options) : registry_(registry), options_(std::move(options)) {
  if (options_.review_dir.empty()) options_.review_dir = registry_.root() / "review";
  if (!options_.clock) options_.clock = utc_now_iso8601;
  if (!options_.taxonomy) options_.taxonomy = &Taxonomy::builtin();
  reload_review();
}

void Service::reload_review() {
  auto stubs = read_optional_jsonl(options_.review_dir / "stubs.jsonl", &linkage::stub_from_json);
  auto candidates = read_optional_jsonl(options_.review_dir / "candidates.jsonl", &linkage::candidate_from_json);
  auto decisions = read_optional_jsonl(options_.review_dir / "decisions.jsonl", &linkage::decision_from_json);
  std::lock_guard lock(review_mutex_);
  stubs_.clear();
  for (auto& s : stubs) stubs_.emplace(s.stub_id, std::move(s));
  candidates_ = std::move(candidates);
  decisions_ = std::move(decisions);
}

HttpResponse Service::handle(const HttpRequest& request) {
  try {
    auto parts = split_path(request.path);
    if (parts.size() < 2 || parts[0] != "api") return error_response(404, "NOT_FOUND", "no route for " + request.path);
    const auto& route = parts[1];
    const bool get = request.method == "GET";
    const bool post = request.method == "POST";
    if (get && route == "work" && parts.size() == 3) return get_work(request, parts[2]);
    if (get && route == "search" && parts.size() == 2) return search(request);
    if (get && route == "idno" && parts.size() == 4) return idno(parts[2], parts[3]);
    if (post && route == "mint" && parts.size() == 2) return mint(request);
    if (route == "review" && parts.size() == 3) {
      if (get && parts[2] == "queue") return review_queue(request);
      if (post && parts[2] == "decision") return review_decision(request);
      if (get && parts[2] == "clusters") return review_clusters(request);
    }
    if (get && route == "taxonomy" && parts.size() <= 3) return taxonomy(request, parts.size() == 3 ? parts[2] : "");
    return error_response(404, "NOT_FOUND", "no route for " + request.method + " " + request.path);
  } catch (const Error& e) {
    if (e.code() == "NOT_FOUND") return error_response(404, e.code(), e.what());
    if (e.code() == "READ_ONLY" || e.code() == "IDNO_CONFLICT") return error_response(409, e.code(), e.what());
    return error_response(400, e.code(), e.what());
  } catch (const json::exception& e) {
    return error_response(400, "BAD_REQUEST", e.what());
  }
}

HttpResponse Service::get_work(const HttpRequest& request, const std::string& id) {
  auto n = parse_uint(id);
  if (!n) return error_response(400, "BAD_REQUEST", "work id must be numeric");
  auto record = registry_.get(EntityUri{EntityKind::work, *n, std::nullopt});

  std::string format = request.param("format").value_or("");
  if (format.empty()) {
    const auto& accept = request.accept;
    if (accept.find("application/n-triples") != std::string::npos) format = "nt";
    else if (accept.find("text/turtle") != std::string::npos) format = "ttl";
    else if (accept.find("application/tei+xml") != std::string::npos ||
             accept.find("application/xml") != std::string::npos)
      format = "tei";
    else format = "json";
  }
  if (format == "json") return json_response(200, to_json(record));
  if (format == "tei") return {200, "application/tei+xml", serialize_work_record(record), {}};
  if (format == "nt" || format == "ttl") {
    auto triples = rdf::record_to_triples(record, options_.ns);
    if (format == "nt")
      return {200, "application/n-triples", rdf::serialize_graph(triples, rdf::GraphFormat::ntriples, options_.ns), {}};
    return {200, "text/turtle", rdf::serialize_graph(triples, rdf::GraphFormat::turtle, options_.ns), {}};
  }
  return error_response(400, "BAD_REQUEST", "unknown format '" + format + "'");
}

HttpResponse Service::search(const HttpRequest& request) {
  auto page = page_of(request);
  auto query = request.param("title").value_or("");
  auto lang = request.param("lang");
  std::vector<json> items;
  for (const auto& hit : registry_.search_titles(query, lang ? std::optional<std::string_view>(*lang) : std::nullopt))
    items.push_back({{"uri", hit.uri.render()}, {"headword", hit.headword}, {"score", hit.score}});
  return json_response(200, paged(items, page));
}

HttpResponse Service::idno(const std::string& scheme, const std::string& value) {
  auto uri = registry_.find_by_idno(scheme, value);
  if (!uri) return error_response(404, "NOT_FOUND", "no work with " + scheme + " " + value);
  auto response = json_response(303, {{"uri", uri->render()}});
  response.headers.emplace_back("Location", "/api/work/" + std::to_string(uri->id));
  return response;
}

HttpResponse Service::mint(const HttpRequest& request) {
  auto body = request.body.empty() ? json::object() : json::parse(request.body);
  auto kind_name = body.value("kind", "work");
  auto kind = entity_kind_from_string(kind_name);
  if (!kind) return error_response(400, "BAD_REQUEST", "unknown entity kind '" + kind_name + "'");
  auto uri = registry_.mint(*kind);
  return json_response(201, {{"uri", uri.render()}});
}

json Service::side_context(const std::string& item_id) const {
  if (auto it = stubs_.find(item_id); it != stubs_.end()) {
    const auto& s = it->second;
    json j{{"id", s.stub_id}, {"kind", "stub"}, {"titles", json::array()}, {"provenance", s.provenance}};
    for (const auto& t : s.titles) j["titles"].push_back(lang_text(t));
    if (s.author_uri || s.author_name) {
      j["author"] = json::object();
      if (s.author_uri) j["author"]["uri"] = s.author_uri->render();
      if (s.author_name) j["author"]["name"] = *s.author_name;
    }
    if (s.incipit) j["incipit"] = lang_text(*s.incipit);
    if (s.source_ms)
      j["manuscript"] = {{"uri", s.source_ms->manuscript.render()},
                         {"locus", s.source_ms->locus.display.empty()
                                       ? s.source_ms->locus.from + "-" + s.source_ms->locus.to
                                       : s.source_ms->locus.display}};
    return j;
  }
  if (auto uri = EntityUri::try_parse(item_id); uri && registry_.contains(*uri)) {
    auto record = registry_.get(*uri);
    json j{{"id", item_id}, {"kind", "work"}, {"headword", display_headword(record)}, {"titles", json::array()}};
    for (const auto& t : record.titles) j["titles"].push_back({{"lang", t.lang}, {"text", t.text.str()}});
    j["authors"] = json::array();
    for (const auto& a : record.authors) {
      json aj{{"name", a.display_name()}};
      if (a.person) aj["uri"] = a.person->render();
      j["authors"].push_back(std::move(aj));
    }
    for (const auto& n : record.notes)
      if (n.type == NoteType::incipit && !n.segments.empty()) {
        j["incipit"] = {{"lang", n.segments.front().lang.value_or("")}, {"text", n.segments.front().text}};
        break;
      }
    return j;
  }
  return {{"id", item_id}, {"kind", "unknown"}};
}

HttpResponse Service::review_queue(const HttpRequest& request) {
  auto page = page_of(request);
  auto band_name = request.param("band").value_or("review");
  std::optional<linkage::Band> band;
  if (band_name != "all") band = linkage::band_from_string(band_name);
  double min_score = 0.0;
  if (auto v = request.param("min_score")) {
    try {
      min_score = std::stod(*v);
    } catch (const std::exception&) {
      return error_response(400, "BAD_REQUEST", "min_score must be a number");
    }
  }
  auto editor = request.param("editor");

  std::lock_guard lock(review_mutex_);
  std::vector<const linkage::MatchCandidate*> selected;
  for (const auto& c : candidates_)
    if ((!band || c.band == *band) && c.score >= min_score) selected.push_back(&c);
  std::stable_sort(selected.begin(), selected.end(), [](auto* a, auto* b) {
    if (a->score != b->score) return a->score > b->score;
    return a->candidate_id < b->candidate_id;
  });
  auto state = linkage::fold_decisions(decisions_);
  std::vector<json> items;
  for (const auto* c : selected) {
    auto j = linkage::to_json(*c);
    j["left_context"] = side_context(c->left);
    j["right_context"] = side_context(c->right);
    auto it = state.find(c->candidate_id);
    auto s = it == state.end() ? linkage::CandidateState::undecided : it->second;
    j["state"] = s == linkage::CandidateState::accepted   ? "accepted"
                 : s == linkage::CandidateState::rejected ? "rejected"
                                                          : "undecided";
    json decisions = json::array();
    for (const auto& d : decisions_)
      if (d.candidate_id == c->candidate_id && (!editor || d.editor == *editor)) decisions.push_back(linkage::to_json(d));
    j["decisions"] = decisions;
    items.push_back(std::move(j));
  }
  return json_response(200, paged(items, page));
}

HttpResponse Service::review_decision(const HttpRequest& request) {
  auto body = json::parse(request.body);
  if (!body.is_object() || !body.contains("candidate_id") || !body.contains("verdict") || !body.contains("editor"))
    return error_response(400, "BAD_REQUEST", "decision needs candidate_id, verdict and editor");
  linkage::MatchDecision d;
  d.candidate_id = body.at("candidate_id").get<std::string>();
  d.verdict = linkage::verdict_from_string(body.at("verdict").get<std::string>());
  d.editor = body.at("editor").get<std::string>();
  if (d.editor.empty()) return error_response(400, "BAD_REQUEST", "editor must not be empty");

  std::lock_guard lock(review_mutex_);
  auto known = std::any_of(candidates_.begin(), candidates_.end(),
                           [&](const auto& c) { return c.candidate_id == d.candidate_id; });
  if (!known) return error_response(404, "UNKNOWN_CANDIDATE", "no candidate '" + d.candidate_id + "'");
  const linkage::MatchDecision* previous = nullptr;
  for (const auto& prior : decisions_)
    if (prior.candidate_id == d.candidate_id && prior.editor == d.editor) previous = &prior;
  if (previous) {
    if (previous->verdict == d.verdict) return json_response(200, linkage::to_json(*previous));
    return error_response(409, "DECISION_CONFLICT",
                          d.editor + " already recorded '" + std::string(to_string(previous->verdict)) + "' for " +
                              d.candidate_id);
  }
  d.timestamp = options_.clock();
  std::filesystem::create_directories(options_.review_dir);
  {
    std::ofstream out(options_.review_dir / "decisions.jsonl", std::ios::app);
    if (!out) throw Error("IO_ERROR", "cannot append to decisions.jsonl");
    out << linkage::to_json(d).dump() << '\n';
  }
  decisions_.push_back(d);
  return json_response(201, linkage::to_json(d));
}

HttpResponse Service::review_clusters(const HttpRequest& request) {
  auto page = page_of(request);
  std::size_t min_size = 1;
  if (auto v = request.param("min_size")) {
    auto n = parse_uint(*v);
    if (!n) return error_response(400, "BAD_REQUEST", "min_size must be a non-negative integer");
    min_size = static_cast<std::size_t>(*n);
  }
  std::lock_guard lock(review_mutex_);
  std::vector<std::string> ids;
  for (const auto& [id, stub] : stubs_) ids.push_back(id);
  std::vector<json> items;
  for (const auto& c : linkage::apply_decisions(ids, candidates_, decisions_))
    if (c.members.size() >= min_size) items.push_back(linkage::to_json(c));
  return json_response(200, paged(items, page));
}

HttpResponse Service::taxonomy(const HttpRequest& request, const std::string& code) {
  const auto& tax = *options_.taxonomy;
  if (code.empty()) {
    auto page = page_of(request);
    std::vector<json> items;
    for (const auto& node : tax.nodes()) items.push_back(to_json(node));
    return json_response(200, paged(items, page));
  }
  auto j = to_json(tax.lookup(code));
  json children = json::array();
  for (const auto& child : tax.children(code)) children.push_back(to_json(child));
  j["children"] = children;
  return json_response(200, j);
}

void Service::mount(httplib::Server& server) {
  auto bridge = [this](const httplib::Request& req, httplib::Response& res) {
    HttpRequest request;
    request.method = req.method;
    request.path = req.path;
    for (const auto& [k, v] : req.params) request.params.emplace(k, v);
    request.accept = req.get_header_value("Accept");
    request.body = req.body;
    auto response = handle(request);
    res.status = response.status;
    for (const auto& [k, v] : response.headers) res.set_header(k, v);
    res.set_content(response.body, response.content_type + "; charset=utf-8");
  };
  server.Get(R"(/api/.*)", bridge);
  server.Post(R"(/api/.*)", bridge);
}

}  // namespace workauth
