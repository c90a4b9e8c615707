#pragma once

#include <memory>
#include <string>
#include <vector>

#include "cornering/base.hpp"
#include "cornering/protocol.hpp"

namespace cornering {

// The four-sided boundary of a cell: protocols left and right, object
// words top and bottom.
struct CellType {
  ProtocolWord left;
  ObjectWord top;
  ObjectWord bottom;
  ProtocolWord right;

  friend bool operator==(const CellType& a, const CellType& b) {
    return a.left == b.left && a.top == b.top && a.bottom == b.bottom &&
           a.right == b.right;
  }
  friend bool operator!=(const CellType& a, const CellType& b) { return !(a == b); }
};

inline std::size_t cell_hash(const CellType& t) {
  std::size_t h = proto_hash(t.left);
  h = hash_mix(h, word_hash(t.top));
  h = hash_mix(h, word_hash(t.bottom));
  h = hash_mix(h, proto_hash(t.right));
  return h;
}

inline std::string cell_str(const CellType& t) {
  return "<" + proto_str(t.left) + " | " + word_str(t.top) + " -> " +
         word_str(t.bottom) + " | " + proto_str(t.right) + ">";
}

inline bool is_vertical(const CellType& t) {
  return t.left.empty() && t.right.empty();
}

enum class TermKind : uint8_t {
  Base,      // [f]            embedded base morphism
  VId,       // 1@A            vertical identity
  HId,       // id@U           horizontal identity
  VComp,     // a . b
  HComp,     // a | b
  CornerUR,  // A^>            receive from the left
  CornerLL,  // A_>            send to the right
  CornerUL,  // A^<            receive from the right
  CornerLR,  // A_<            send to the left
  Inj,       // inj{i}@{U,W}   left participant selects a branch
  Proj,      // proj{i}@{U,W}  right participant selects a branch
  Sum,       // a (+) b        react to a left choice
  Prod,      // a (x) b        react to a right choice
};

struct Term;
using TermPtr = std::shared_ptr<const Term>;

// A node of the process-term tree. Every node carries the cell type it
// was checked with at construction; ill-typed nodes cannot be built.
struct Term {
  TermKind kind;
  CellType type;
  std::size_t hash = 0;
  std::size_t nodes = 1;     // tree size
  std::size_t specials = 0;  // number of special subterms

  BaseMor base;              // Base
  ObjectWord obj;            // VId, corners
  ProtocolWord proto;        // HId; Inj/Proj first protocol
  ProtocolWord proto2;       // Inj/Proj second protocol
  int index = 0;             // Inj/Proj
  TermPtr fst, snd;          // VComp, HComp, Sum, Prod
};

inline bool term_eq(const TermPtr& a, const TermPtr& b) {
  if (a.get() == b.get()) return true;
  if (a->hash != b->hash || a->kind != b->kind) return false;
  switch (a->kind) {
    case TermKind::Base:
      return a->base == b->base;
    case TermKind::VId:
    case TermKind::CornerUR:
    case TermKind::CornerLL:
    case TermKind::CornerUL:
    case TermKind::CornerLR:
      return a->obj == b->obj;
    case TermKind::HId:
      return a->proto == b->proto;
    case TermKind::Inj:
    case TermKind::Proj:
      return a->index == b->index && a->proto == b->proto && a->proto2 == b->proto2;
    case TermKind::VComp:
    case TermKind::HComp:
    case TermKind::Sum:
    case TermKind::Prod:
      return term_eq(a->fst, b->fst) && term_eq(a->snd, b->snd);
  }
  return false;
}

namespace detail {

inline TermPtr finish(Term t) {
  std::size_t h = static_cast<std::size_t>(t.kind) * 0x9e3779b97f4a7c15ull;
  switch (t.kind) {
    case TermKind::Base:
      h = hash_mix(h, base_hash(t.base));
      break;
    case TermKind::VId:
    case TermKind::CornerUR:
    case TermKind::CornerLL:
    case TermKind::CornerUL:
    case TermKind::CornerLR:
      h = hash_mix(h, word_hash(t.obj));
      break;
    case TermKind::HId:
      h = hash_mix(h, proto_hash(t.proto));
      break;
    case TermKind::Inj:
    case TermKind::Proj:
      h = hash_mix(h, static_cast<std::size_t>(t.index));
      h = hash_mix(h, proto_hash(t.proto));
      h = hash_mix(h, proto_hash(t.proto2));
      break;
    case TermKind::VComp:
    case TermKind::HComp:
    case TermKind::Sum:
    case TermKind::Prod:
      h = hash_mix(h, t.fst->hash);
      h = hash_mix(h, t.snd->hash);
      t.nodes = 1 + t.fst->nodes + t.snd->nodes;
      break;
  }
  t.hash = h;
  return std::make_shared<const Term>(std::move(t));
}

}  // namespace detail

inline TermPtr t_base(BaseMor f) {
  Term t;
  t.kind = TermKind::Base;
  t.type = CellType{{}, f.dom, base_cod(f), {}};
  t.base = std::move(f);
  return detail::finish(std::move(t));
}

inline TermPtr t_vid(ObjectWord a) {
  Term t;
  t.kind = TermKind::VId;
  t.type = CellType{{}, a, a, {}};
  t.obj = std::move(a);
  return detail::finish(std::move(t));
}

inline TermPtr t_hid(ProtocolWord u) {
  Term t;
  t.kind = TermKind::HId;
  t.type = CellType{u, {}, {}, u};
  t.proto = std::move(u);
  return detail::finish(std::move(t));
}

inline TermPtr t_vcomp(TermPtr a, TermPtr b) {
  if (a->type.bottom != b->type.top)
    throw BoundaryMismatch("vertical compose: " + word_str(a->type.bottom) +
                           " vs " + word_str(b->type.top));
  Term t;
  t.kind = TermKind::VComp;
  t.type = CellType{proto_concat(a->type.left, b->type.left), a->type.top,
                    b->type.bottom, proto_concat(a->type.right, b->type.right)};
  t.specials = a->specials + b->specials;
  t.fst = std::move(a);
  t.snd = std::move(b);
  return detail::finish(std::move(t));
}

inline TermPtr t_hcomp(TermPtr a, TermPtr b) {
  if (a->type.right != b->type.left)
    throw BoundaryMismatch("horizontal compose: " + proto_str(a->type.right) +
                           " vs " + proto_str(b->type.left));
  Term t;
  t.kind = TermKind::HComp;
  t.type = CellType{a->type.left, word_concat(a->type.top, b->type.top),
                    word_concat(a->type.bottom, b->type.bottom), b->type.right};
  t.specials = a->specials + b->specials;
  t.fst = std::move(a);
  t.snd = std::move(b);
  return detail::finish(std::move(t));
}

inline TermPtr t_corner_ur(ObjectWord a) {
  Term t;
  t.kind = TermKind::CornerUR;
  t.type = CellType{proto_word(proto_send(a)), {}, a, {}};
  t.obj = std::move(a);
  t.specials = 1;
  return detail::finish(std::move(t));
}

inline TermPtr t_corner_ll(ObjectWord a) {
  Term t;
  t.kind = TermKind::CornerLL;
  t.type = CellType{{}, a, {}, proto_word(proto_send(a))};
  t.obj = std::move(a);
  t.specials = 1;
  return detail::finish(std::move(t));
}

inline TermPtr t_corner_ul(ObjectWord a) {
  Term t;
  t.kind = TermKind::CornerUL;
  t.type = CellType{{}, {}, a, proto_word(proto_recv(a))};
  t.obj = std::move(a);
  t.specials = 1;
  return detail::finish(std::move(t));
}

inline TermPtr t_corner_lr(ObjectWord a) {
  Term t;
  t.kind = TermKind::CornerLR;
  t.type = CellType{proto_word(proto_recv(a)), a, {}, {}};
  t.obj = std::move(a);
  t.specials = 1;
  return detail::finish(std::move(t));
}

inline TermPtr t_inj(int i, ProtocolWord u, ProtocolWord w) {
  if (i != 0 && i != 1) throw Error("inj index must be 0 or 1");
  Term t;
  t.kind = TermKind::Inj;
  t.type = CellType{i == 0 ? u : w, {}, {}, proto_word(proto_plus(u, w))};
  t.index = i;
  t.proto = std::move(u);
  t.proto2 = std::move(w);
  t.specials = 1;
  return detail::finish(std::move(t));
}

inline TermPtr t_proj(int i, ProtocolWord u, ProtocolWord w) {
  if (i != 0 && i != 1) throw Error("proj index must be 0 or 1");
  Term t;
  t.kind = TermKind::Proj;
  t.type = CellType{proto_word(proto_times(u, w)), {}, {}, i == 0 ? u : w};
  t.index = i;
  t.proto = std::move(u);
  t.proto2 = std::move(w);
  t.specials = 1;
  return detail::finish(std::move(t));
}

inline TermPtr t_sum(TermPtr a, TermPtr b) {
  if (a->type.top != b->type.top || a->type.bottom != b->type.bottom ||
      a->type.right != b->type.right)
    throw BoundaryMismatch("sum: branches must agree on top, bottom and right");
  Term t;
  t.kind = TermKind::Sum;
  t.type = CellType{proto_word(proto_plus(a->type.left, b->type.left)), a->type.top,
                    a->type.bottom, a->type.right};
  t.specials = 1 + a->specials + b->specials;
  t.fst = std::move(a);
  t.snd = std::move(b);
  return detail::finish(std::move(t));
}

inline TermPtr t_prod(TermPtr a, TermPtr b) {
  if (a->type.top != b->type.top || a->type.bottom != b->type.bottom ||
      a->type.left != b->type.left)
    throw BoundaryMismatch("prod: branches must agree on left, top and bottom");
  Term t;
  t.kind = TermKind::Prod;
  t.type = CellType{a->type.left, a->type.top, a->type.bottom,
                    proto_word(proto_times(a->type.right, b->type.right))};
  t.specials = 1 + a->specials + b->specials;
  t.fst = std::move(a);
  t.snd = std::move(b);
  return detail::finish(std::move(t));
}

// Number of special subterms: the corner, injection and projection
// leaves plus one for each sum or product node.
inline std::size_t count_special(const TermPtr& a) { return a->specials; }

inline bool is_vertical(const TermPtr& a) { return is_vertical(a->type); }

// Positions are child-index paths from the root; 0 is fst, 1 is snd.
using Path = std::vector<int>;

inline std::string path_str(const Path& p) {
  if (p.empty()) return "-";
  std::string out;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (i) out += ".";
    out += std::to_string(p[i]);
  }
  return out;
}

inline TermPtr subterm_at(const TermPtr& t, const Path& p, std::size_t from = 0) {
  if (from == p.size()) return t;
  const TermPtr& child = p[from] == 0 ? t->fst : t->snd;
  if (p[from] != 0 && p[from] != 1) throw InvalidPosition("bad path step");
  if (!child) throw InvalidPosition("path descends into a leaf");
  return subterm_at(child, p, from + 1);
}

inline TermPtr replace_at(const TermPtr& t, const Path& p, const TermPtr& repl,
                          std::size_t from = 0) {
  if (from == p.size()) return repl;
  if (p[from] != 0 && p[from] != 1) throw InvalidPosition("bad path step");
  if (!t->fst) throw InvalidPosition("path descends into a leaf");
  TermPtr a = t->fst, b = t->snd;
  if (p[from] == 0)
    a = replace_at(a, p, repl, from + 1);
  else
    b = replace_at(b, p, repl, from + 1);
  switch (t->kind) {
    case TermKind::VComp: return t_vcomp(a, b);
    case TermKind::HComp: return t_hcomp(a, b);
    case TermKind::Sum: return t_sum(a, b);
    case TermKind::Prod: return t_prod(a, b);
    default: throw InvalidPosition("path descends into a leaf");
  }
}

}  // namespace cornering
