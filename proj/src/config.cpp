#include "workauth/config.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "workauth/error.hpp"
#include "workauth/model.hpp"

namespace workauth {

Config Config::parse(std::string_view text) {
  Config config;
  std::istringstream in{std::string(text)};
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto trimmed = normalize_space(line);
    if (trimmed.empty() || trimmed.front() == '#') continue;
    auto eq = trimmed.find('=');
    if (eq == std::string::npos)
      throw Error("CONFIG_INVALID", "line " + std::to_string(lineno) + ": expected key = value");
    auto key = normalize_space(trimmed.substr(0, eq));
    auto value = normalize_space(trimmed.substr(eq + 1));
    if (key.empty()) throw Error("CONFIG_INVALID", "line " + std::to_string(lineno) + ": empty key");
    config.entries_[key] = value;
  }
  return config;
}

Config Config::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("IO_ERROR", "cannot read config " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse(buf.str());
}

std::optional<std::string> Config::get(std::string_view key) const {
  auto it = entries_.find(key);
  if (it == entries_.end()) return std::nullopt;
  return it->second;
}

std::optional<double> Config::get_number(std::string_view key) const {
  auto value = get(key);
  if (!value) return std::nullopt;
  double out = 0;
  auto [ptr, ec] = std::from_chars(value->data(), value->data() + value->size(), out);
  if (ec != std::errc() || ptr != value->data() + value->size())
    throw Error("CONFIG_INVALID", std::string(key) + ": not a number: '" + *value + "'");
  return out;
}

NamespaceTable Config::namespaces() const {
  auto table = NamespaceTable::defaults();
  for (const auto& [key, value] : entries_)
    if (key.starts_with("ns.")) table.bind(key.substr(3), value);
  return table;
}

linkage::Weights Config::weights() const {
  linkage::Weights w;
  if (auto v = get_number("weight.title")) w.title = *v;
  if (auto v = get_number("weight.author")) w.author = *v;
  if (auto v = get_number("weight.incipit")) w.incipit = *v;
  return w;
}

linkage::Thresholds Config::thresholds() const {
  linkage::Thresholds t;
  if (auto v = get_number("threshold.auto")) t.auto_merge = *v;
  if (auto v = get_number("threshold.review")) t.review = *v;
  t.check();
  return t;
}

}  // namespace workauth
