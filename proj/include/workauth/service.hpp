#pragma once

#include <filesystem>
#include <functional>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "workauth/linkage.hpp"
#include "workauth/namespaces.hpp"
#include "workauth/registry.hpp"
#include "workauth/taxonomy.hpp"

namespace httplib {
class Server;
}

namespace workauth {

struct HttpRequest {
  std::string method = "GET";
  std::string path;
  std::multimap<std::string, std::string> params;
  std::string accept;
  std::string body;

  std::optional<std::string> param(const std::string& key) const;
};

struct HttpResponse {
  int status = 200;
  std::string content_type = "application/json";
  std::string body;
  std::vector<std::pair<std::string, std::string>> headers;
};

struct ServiceOptions {
  /// Directory holding stubs.jsonl, candidates.jsonl and decisions.jsonl.
  /// Defaults to `{registry root}/review`.
  std::filesystem::path review_dir;
  NamespaceTable ns = NamespaceTable::defaults();
  const Taxonomy* taxonomy = &Taxonomy::builtin();
  /// Timestamp source for posted decisions (ISO-8601 UTC).
  std::function<std::string()> clock;
};

/// JSON-first HTTP API over a registry plus the linkage review files.
/// handle() is transport independent; mount() binds it to cpp-httplib.
class Service {
 public:
  Service(Registry& registry, ServiceOptions options = {});

  HttpResponse handle(const HttpRequest& request);
  void mount(httplib::Server& server);

  /// Re-reads the review files (e.g. after `link` rewrote them).
  void reload_review();

 private:
  HttpResponse get_work(const HttpRequest& request, const std::string& id);
  HttpResponse search(const HttpRequest& request);
  HttpResponse idno(const std::string& scheme, const std::string& value);
  HttpResponse mint(const HttpRequest& request);
  HttpResponse review_queue(const HttpRequest& request);
  HttpResponse review_decision(const HttpRequest& request);
  HttpResponse review_clusters(const HttpRequest& request);
  HttpResponse taxonomy(const HttpRequest& request, const std::string& code);

  nlohmann::json side_context(const std::string& item_id) const;

  Registry& registry_;
  ServiceOptions options_;
  mutable std::mutex review_mutex_;
  std::vector<linkage::MatchCandidate> candidates_;
  std::map<std::string, linkage::WorkStub> stubs_;
  std::vector<linkage::MatchDecision> decisions_;
};

std::string utc_now_iso8601();

}  // namespace workauth
