#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace workauth {

/// Decompose, case-fold, drop punctuation and combining marks (diacritics,
/// vowel points), recompose, split on whitespace. lang is accepted for
/// interface symmetry; the pipeline is language independent.
std::vector<std::string> normalize_title(std::string_view text, std::string_view lang = {});

/// Number of Unicode code points in a UTF-8 string.
std::size_t codepoint_length(std::string_view utf8);

/// |A ∩ B| / |A ∪ B| over token sets; two empty sets compare as 1.
double jaccard(const std::vector<std::string>& a, const std::vector<std::string>& b);

/// Levenshtein distance over code points.
std::size_t edit_distance(std::string_view a, std::string_view b);

/// 1 - edit_distance / max(len); two empty strings give 1.
double edit_similarity(std::string_view a, std::string_view b);

std::string join(const std::vector<std::string>& parts, std::string_view sep);

}  // namespace workauth
