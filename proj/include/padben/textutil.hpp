#pragma once

#include <cstddef>
#include <set>
#include <string>
#include <vector>

namespace padben {

// Lowercased word tokens: maximal runs of alphanumeric characters, split on
// everything else. Bytes >= 0x80 count as word characters so non-ASCII words
// survive intact (no case folding outside ASCII).
std::vector<std::string> word_tokens(const std::string& text);

// Whitespace-delimited tokens, original casing preserved.
std::vector<std::string> ws_tokens(const std::string& text);

std::string join(const std::vector<std::string>& parts, const std::string& sep);

std::string trim(const std::string& s);

std::string to_lower_ascii(const std::string& s);

// Number of Unicode code points; malformed bytes count as one each.
std::size_t utf8_length(const std::string& s);

bool is_valid_utf8(const std::string& s);

// |A ∩ B| / |A ∪ B| over lowercased word tokens; both empty -> 1.0.
double jaccard_tokens(const std::string& a, const std::string& b);

// Character trigram set; strings shorter than 3 characters contribute the
// whole string as a single element.
std::set<std::string> char_trigrams(const std::string& s);

// Jaccard similarity over character trigram sets. Both inputs must be
// non-empty.
double trigram_similarity(const std::string& a, const std::string& b);

bool is_stopword(const std::string& lowercased_token);

}  // namespace padben
