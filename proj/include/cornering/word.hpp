#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace cornering {

// An object of the free monoidal base: a word of generating-object names.
// The empty word is the monoidal unit I.
using ObjectWord = std::vector<std::string>;

inline ObjectWord word_unit() { return {}; }

inline ObjectWord word_of(std::string name) { return {std::move(name)}; }

inline ObjectWord word_concat(const ObjectWord& a, const ObjectWord& b) {
  ObjectWord r = a;
  r.insert(r.end(), b.begin(), b.end());
  return r;
}

inline ObjectWord word_slice(const ObjectWord& w, std::size_t from, std::size_t to) {
  return ObjectWord(w.begin() + static_cast<std::ptrdiff_t>(from),
                    w.begin() + static_cast<std::ptrdiff_t>(to));
}

inline bool word_is_unit(const ObjectWord& w) { return w.empty(); }

inline std::size_t hash_mix(std::size_t h, std::size_t v) {
  // 64-bit splitmix-style combiner.
  v += 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
  return h ^ v;
}

inline std::size_t word_hash(const ObjectWord& w) {
  std::size_t h = 0xcbf29ce484222325ull;
  for (const auto& s : w) h = hash_mix(h, std::hash<std::string>{}(s));
  return h;
}

inline std::string word_str(const ObjectWord& w) {
  if (w.empty()) return "I";
  std::string out;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (i) out += " * ";
    out += w[i];
  }
  return out;
}

// Parenthesized when the word has more than one factor.
inline std::string word_str_parens(const ObjectWord& w) {
  if (w.size() <= 1) return word_str(w);
  return "(" + word_str(w) + ")";
}

}  // namespace cornering
