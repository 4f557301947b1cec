#include "workauth/lang.hpp"

#include <cctype>
#include <vector>

#include "workauth/error.hpp"

namespace workauth {

namespace {

std::string lower(std::string_view s) {
  std::string out(s);
  for (auto& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

std::string upper(std::string_view s) {
  std::string out(s);
  for (auto& c : out) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  return out;
}

bool alpha(std::string_view s) {
  for (char c : s)
    if (!std::isalpha(static_cast<unsigned char>(c))) return false;
  return true;
}

bool digits(std::string_view s) {
  for (char c : s)
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  return true;
}

}  // namespace

bool is_syc(std::string_view tag) {
  return lower(tag.substr(0, tag.find('-'))) == "syc";
}

NormalizedLang normalize_lang(std::string_view tag) {
  if (tag.empty()) throw Error("LANG_EMPTY", "empty language tag");

  std::vector<std::string_view> parts;
  std::size_t start = 0;
  while (true) {
    auto dash = tag.find('-', start);
    parts.push_back(tag.substr(start, dash - start));
    if (dash == std::string_view::npos) break;
    start = dash + 1;
  }

  NormalizedLang out;
  bool after_singleton = false;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    auto part = parts[i];
    std::string norm;
    if (i == 0) {
      norm = lower(part);
      if (norm == "syc") {
        norm = "syr";
        out.warned = true;
      }
    } else if (after_singleton) {
      norm = lower(part);
    } else if (part.size() == 1) {
      norm = lower(part);
      after_singleton = true;  // extension or private use: rest stays lower case
    } else if (part.size() == 4 && alpha(part)) {
      norm = upper(part.substr(0, 1)) + lower(part.substr(1));
    } else if ((part.size() == 2 && alpha(part)) || (part.size() == 3 && digits(part))) {
      norm = upper(part);
    } else {
      norm = lower(part);
    }
    if (i > 0) out.tag += '-';
    out.tag += norm;
  }
  return out;
}

}  // namespace workauth
