#pragma once

#include <string>
#include <string_view>

namespace workauth {

struct NormalizedLang {
  std::string tag;
  bool warned = false;

  friend bool operator==(const NormalizedLang&, const NormalizedLang&) = default;
};

/// Case-normalizes a BCP-47 style tag (language lower, script title case,
/// region upper) and maps the Classical Syriac code "syc" to the
/// macrolanguage "syr" with warned = true. Throws Error("LANG_EMPTY").
NormalizedLang normalize_lang(std::string_view tag);

/// True when the primary subtag of tag is "syc" (any case).
bool is_syc(std::string_view tag);

}  // namespace workauth
