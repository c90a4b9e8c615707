#pragma once

#include <string>

#include "cornering/term.hpp"

namespace cornering {

inline std::string proto_str_arg(const ProtocolWord& w) {
  if (w.empty()) return "1";
  if (w.size() == 1) return proto_atom_str(w[0]);
  return "(" + proto_str(w) + ")";
}

// Precedence: 0 sum/prod (non-associative), 1 vertical, 2 horizontal,
// 3 atoms. Vertical and horizontal composition print left-associated;
// right-nested children are parenthesized so parsing reproduces the tree.
inline std::string term_str(const TermPtr& t, int min_level = 0) {
  std::string out;
  int level = 3;
  switch (t->kind) {
    case TermKind::Base:
      out = "[" + base_str(t->base) + "]";
      break;
    case TermKind::VId:
      out = "1@" + word_str_parens(t->obj);
      break;
    case TermKind::HId:
      out = "id@" + proto_str_arg(t->proto);
      break;
    case TermKind::VComp:
      out = term_str(t->fst, 1) + " . " + term_str(t->snd, 2);
      level = 1;
      break;
    case TermKind::HComp:
      out = term_str(t->fst, 2) + " | " + term_str(t->snd, 3);
      level = 2;
      break;
    case TermKind::CornerUR:
      out = word_str_parens(t->obj) + "^>";
      break;
    case TermKind::CornerLL:
      out = word_str_parens(t->obj) + "_>";
      break;
    case TermKind::CornerUL:
      out = word_str_parens(t->obj) + "^<";
      break;
    case TermKind::CornerLR:
      out = word_str_parens(t->obj) + "_<";
      break;
    case TermKind::Inj:
      out = "inj" + std::to_string(t->index) + "@{" + proto_str(t->proto) + ", " +
            proto_str(t->proto2) + "}";
      break;
    case TermKind::Proj:
      out = "proj" + std::to_string(t->index) + "@{" + proto_str(t->proto) + ", " +
            proto_str(t->proto2) + "}";
      break;
    case TermKind::Sum:
      out = term_str(t->fst, 1) + " (+) " + term_str(t->snd, 1);
      level = 0;
      break;
    case TermKind::Prod:
      out = term_str(t->fst, 1) + " (x) " + term_str(t->snd, 1);
      level = 0;
      break;
  }
  if (level < min_level) return "(" + out + ")";
  return out;
}

// 64-bit FNV-1a of the printed form; used to tag trace steps.
inline std::string term_digest(const TermPtr& t) {
  std::string s = term_str(t);
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  char buf[17];
  snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return std::string(buf);
}

}  // namespace cornering
