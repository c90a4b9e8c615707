#pragma once

#include <deque>
#include <functional>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "cornering/trace.hpp"

namespace cornering {

// ---------------------------------------------------------------------
// A normal form for the orientable part of the basic equations:
// associativity, units, id/1 coincidence, and functoriality of the base
// embedding. Interchange is not oriented, so canonical forms decide
// structural equality only up to interchange; the bounded searches below
// close that gap. Used for search states, never for emitted terms.

inline TermPtr struct_canon(const TermPtr& t);

namespace detail {

inline void v_spine(const TermPtr& t, std::vector<TermPtr>& out) {
  if (t->kind == TermKind::VComp) {
    v_spine(t->fst, out);
    v_spine(t->snd, out);
  } else {
    out.push_back(t);
  }
}

inline void h_spine(const TermPtr& t, std::vector<TermPtr>& out) {
  if (t->kind == TermKind::HComp) {
    h_spine(t->fst, out);
    h_spine(t->snd, out);
  } else {
    out.push_back(t);
  }
}

inline std::vector<TermPtr> v_spine(const TermPtr& t) {
  std::vector<TermPtr> s;
  v_spine(t, s);
  return s;
}

inline std::vector<TermPtr> h_spine(const TermPtr& t) {
  std::vector<TermPtr> s;
  h_spine(t, s);
  return s;
}

inline TermPtr rebuild_v(const std::vector<TermPtr>& xs) {
  TermPtr acc = xs.front();
  for (std::size_t i = 1; i < xs.size(); ++i) acc = t_vcomp(acc, xs[i]);
  return acc;
}

inline TermPtr rebuild_h(const std::vector<TermPtr>& xs) {
  TermPtr acc = xs.front();
  for (std::size_t i = 1; i < xs.size(); ++i) acc = t_hcomp(acc, xs[i]);
  return acc;
}

inline bool is_base_identity(const TermPtr& t) {
  return t->kind == TermKind::Base && t->base.is_identity();
}

}  // namespace detail

inline TermPtr struct_canon(const TermPtr& t) {
  switch (t->kind) {
    case TermKind::Base:
      return t;
    case TermKind::VId:
      return t_base(mor_id(t->obj));
    case TermKind::HId:
      return t->proto.empty() ? t_base(mor_id({})) : t;
    case TermKind::CornerUR:
    case TermKind::CornerLL:
    case TermKind::CornerUL:
    case TermKind::CornerLR:
    case TermKind::Inj:
    case TermKind::Proj:
      return t;
    case TermKind::Sum:
      return t_sum(struct_canon(t->fst), struct_canon(t->snd));
    case TermKind::Prod:
      return t_prod(struct_canon(t->fst), struct_canon(t->snd));
    case TermKind::VComp: {
      std::vector<TermPtr> raw = detail::v_spine(
          t_vcomp(struct_canon(t->fst), struct_canon(t->snd)));
      std::vector<TermPtr> out;
      for (const auto& e : raw) {
        if (detail::is_base_identity(e)) continue;
        if (!out.empty()) {
          if (out.back()->kind == TermKind::Base && e->kind == TermKind::Base) {
            out.back() = t_base(mor_comp(out.back()->base, e->base));
            if (detail::is_base_identity(out.back())) out.pop_back();
            continue;
          }
          if (out.back()->kind == TermKind::HId && e->kind == TermKind::HId) {
            out.back() = t_hid(proto_concat(out.back()->proto, e->proto));
            continue;
          }
        }
        out.push_back(e);
      }
      if (out.empty()) return t_base(mor_id(t->type.top));
      return detail::rebuild_v(out);
    }
    case TermKind::HComp: {
      std::vector<TermPtr> raw = detail::h_spine(
          t_hcomp(struct_canon(t->fst), struct_canon(t->snd)));
      std::vector<TermPtr> out;
      for (const auto& e : raw) {
        if (e->kind == TermKind::HId) continue;
        if (detail::is_base_identity(e) && e->base.dom.empty()) continue;
        if (!out.empty() && out.back()->kind == TermKind::Base &&
            e->kind == TermKind::Base) {
          out.back() = t_base(mor_tensor(out.back()->base, e->base));
          continue;
        }
        out.push_back(e);
      }
      if (out.empty()) {
        if (!t->type.left.empty()) return t_hid(t->type.left);
        return t_base(mor_id(t->type.top));
      }
      return detail::rebuild_h(out);
    }
  }
  return t;
}

// ---------------------------------------------------------------------
// Successor generation on canonical states. One generalized interchange
// move covers a raw interchange application up to the collapsed laws;
// interaction and base-rule moves are enumerated on flattened spines so
// that redexes separated only by associativity are found.

struct SearchConfig {
  bool use_struct = true;
  bool use_beta = false;
  const std::vector<BaseRule>* rules = nullptr;
  BaseRwConfig base_cfg{};
};

namespace detail {

using Emit = std::function<void(const TermPtr&)>;
using Rebuild = std::function<TermPtr(const TermPtr&)>;

inline TermPtr v_piece(const std::vector<TermPtr>& sp, std::size_t from, std::size_t to,
                       const TermPtr& whole, bool top_side) {
  if (from == to) {
    // Empty side of a split: the corresponding vertical identity.
    return t_vid(top_side ? whole->type.top : whole->type.bottom);
  }
  return rebuild_v({sp.begin() + static_cast<std::ptrdiff_t>(from),
                    sp.begin() + static_cast<std::ptrdiff_t>(to)});
}

inline TermPtr h_piece(const std::vector<TermPtr>& sp, std::size_t from, std::size_t to,
                       const TermPtr& whole, bool left_side) {
  if (from == to) {
    return t_hid(left_side ? whole->type.left : whole->type.right);
  }
  return rebuild_h({sp.begin() + static_cast<std::ptrdiff_t>(from),
                    sp.begin() + static_cast<std::ptrdiff_t>(to)});
}

inline void canon_moves_walk(const TermPtr& t, const SearchConfig& cfg,
                             const Rebuild& rebuild, const Emit& emit);

inline void walk_children_of_element(const TermPtr& e, const SearchConfig& cfg,
                                     const Rebuild& rebuild, const Emit& emit) {
  if (e->kind == TermKind::Sum || e->kind == TermKind::Prod) {
    bool sum = e->kind == TermKind::Sum;
    canon_moves_walk(e->fst, cfg, [=](const TermPtr& r) {
      return rebuild(sum ? t_sum(r, e->snd) : t_prod(r, e->snd));
    }, emit);
    canon_moves_walk(e->snd, cfg, [=](const TermPtr& r) {
      return rebuild(sum ? t_sum(e->fst, r) : t_prod(e->fst, r));
    }, emit);
  } else if (e->kind == TermKind::Base && cfg.rules) {
    for (const auto& [rule, result] :
         enumerate_base_rewrites(e->base, *cfg.rules, cfg.base_cfg))
      emit(rebuild(t_base(result)));
  } else if (e->kind == TermKind::VComp || e->kind == TermKind::HComp) {
    canon_moves_walk(e, cfg, rebuild, emit);
  }
}

inline void canon_moves_walk(const TermPtr& t, const SearchConfig& cfg,
                             const Rebuild& rebuild, const Emit& emit) {
  if (t->kind == TermKind::VComp) {
    std::vector<TermPtr> sp = v_spine(t);
    auto rebuild_elem = [&](std::size_t i) -> Rebuild {
      return [=](const TermPtr& r) {
        std::vector<TermPtr> next = sp;
        next[i] = r;
        return rebuild(rebuild_v(next));
      };
    };
    for (std::size_t i = 0; i < sp.size(); ++i)
      walk_children_of_element(sp[i], cfg, rebuild_elem(i), emit);
    if (cfg.use_struct) {
      for (std::size_t i = 0; i + 1 < sp.size(); ++i) {
        const TermPtr &x = sp[i], &y = sp[i + 1];
        std::vector<TermPtr> xs = h_spine(x), ys = h_spine(y);
        for (std::size_t j = 0; j <= xs.size(); ++j) {
          for (std::size_t l = 0; l <= ys.size(); ++l) {
            if ((j == 0 && l == 0) || (j == xs.size() && l == ys.size())) continue;
            TermPtr a = h_piece(xs, 0, j, x, true);
            TermPtr b = h_piece(xs, j, xs.size(), x, false);
            TermPtr c = h_piece(ys, 0, l, y, true);
            TermPtr d = h_piece(ys, l, ys.size(), y, false);
            if (a->type.bottom != c->type.top || b->type.bottom != d->type.top)
              continue;
            if (a->type.right != b->type.left || c->type.right != d->type.left)
              continue;
            std::vector<TermPtr> next(sp.begin(),
                                      sp.begin() + static_cast<std::ptrdiff_t>(i));
            next.push_back(t_hcomp(t_vcomp(a, c), t_vcomp(b, d)));
            next.insert(next.end(), sp.begin() + static_cast<std::ptrdiff_t>(i + 2),
                        sp.end());
            emit(rebuild(rebuild_v(next)));
          }
        }
      }
    }
  } else if (t->kind == TermKind::HComp) {
    std::vector<TermPtr> sp = h_spine(t);
    auto rebuild_elem = [&](std::size_t i) -> Rebuild {
      return [=](const TermPtr& r) {
        std::vector<TermPtr> next = sp;
        next[i] = r;
        return rebuild(rebuild_h(next));
      };
    };
    for (std::size_t i = 0; i < sp.size(); ++i)
      walk_children_of_element(sp[i], cfg, rebuild_elem(i), emit);
    for (std::size_t i = 0; i + 1 < sp.size(); ++i) {
      const TermPtr &x = sp[i], &y = sp[i + 1];
      if (cfg.use_beta) {
        for (int r = 0; r <= static_cast<int>(BetaRule::Inj); ++r) {
          auto rule = static_cast<BetaRule>(r);
          auto res = apply_beta_root(t_hcomp(x, y), rule);
          if (!res) continue;
          std::vector<TermPtr> next(sp.begin(),
                                    sp.begin() + static_cast<std::ptrdiff_t>(i));
          next.push_back(*res);
          next.insert(next.end(), sp.begin() + static_cast<std::ptrdiff_t>(i + 2),
                      sp.end());
          emit(rebuild(rebuild_h(next)));
        }
      }
      if (cfg.use_struct) {
        std::vector<TermPtr> xs = v_spine(x), ys = v_spine(y);
        for (std::size_t j = 0; j <= xs.size(); ++j) {
          for (std::size_t l = 0; l <= ys.size(); ++l) {
            if ((j == 0 && l == 0) || (j == xs.size() && l == ys.size())) continue;
            TermPtr a = v_piece(xs, 0, j, x, true);
            TermPtr c = v_piece(xs, j, xs.size(), x, false);
            TermPtr b = v_piece(ys, 0, l, y, true);
            TermPtr d = v_piece(ys, l, ys.size(), y, false);
            if (a->type.right != b->type.left || c->type.right != d->type.left)
              continue;
            if (a->type.bottom != c->type.top || b->type.bottom != d->type.top)
              continue;
            std::vector<TermPtr> next(sp.begin(),
                                      sp.begin() + static_cast<std::ptrdiff_t>(i));
            next.push_back(t_vcomp(t_hcomp(a, b), t_hcomp(c, d)));
            next.insert(next.end(), sp.begin() + static_cast<std::ptrdiff_t>(i + 2),
                        sp.end());
            emit(rebuild(rebuild_h(next)));
          }
        }
      }
    }
  } else {
    walk_children_of_element(t, cfg, rebuild, emit);
  }
}

struct TermKey {
  TermPtr t;
  friend bool operator==(const TermKey& a, const TermKey& b) {
    return term_eq(a.t, b.t);
  }
};

struct TermKeyHash {
  std::size_t operator()(const TermKey& k) const { return k.t->hash; }
};

}  // namespace detail

// Successors of a canonical state; every successor is again canonical
// and convertible to t.
inline std::vector<TermPtr> canon_successors(const TermPtr& t, const SearchConfig& cfg) {
  std::vector<TermPtr> out;
  std::unordered_set<detail::TermKey, detail::TermKeyHash> seen;
  detail::canon_moves_walk(t, cfg, [](const TermPtr& r) { return r; },
                           [&](const TermPtr& r) {
                             TermPtr c = struct_canon(r);
                             if (term_eq(c, t)) return;
                             if (seen.insert({c}).second) out.push_back(c);
                           });
  return out;
}

enum class Bounded : uint8_t { Equal, Unknown };

// Bidirectional search over single structural-equation applications;
// states are kept canonical for the orientable laws, so `depth` bounds
// the number of interchange applications on the connecting path.
// "Unknown" never means "not equal".
inline Bounded eq_struct_bounded(const TermPtr& a, const TermPtr& b, std::size_t depth) {
  if (a->type != b->type) throw TypeMismatch("eq_struct_bounded: different cell types");
  SearchConfig cfg;
  cfg.use_struct = true;
  cfg.use_beta = false;

  using Set = std::unordered_set<detail::TermKey, detail::TermKeyHash>;
  TermPtr ca = struct_canon(a), cb = struct_canon(b);
  if (term_eq(ca, cb)) return Bounded::Equal;
  Set sa{{ca}}, sb{{cb}};
  std::vector<TermPtr> fa{ca}, fb{cb};
  std::size_t used = 0;
  while (used < depth && (!fa.empty() || !fb.empty())) {
    bool expand_a = fa.size() <= fb.size() ? !fa.empty() : fb.empty();
    auto& frontier = expand_a ? fa : fb;
    auto& mine = expand_a ? sa : sb;
    auto& theirs = expand_a ? sb : sa;
    std::vector<TermPtr> next;
    for (const auto& t : frontier) {
      for (const auto& s : canon_successors(t, cfg)) {
        if (theirs.count({s})) return Bounded::Equal;
        if (mine.insert({s}).second) next.push_back(s);
      }
    }
    frontier = std::move(next);
    ++used;
  }
  return Bounded::Unknown;
}

struct JoinResult {
  bool joinable = false;
  TermPtr witness;  // a common reduct, in canonical form
};

// Bounded search for a common reduct under the interaction rewrites
// modulo the basic equations, optionally with base rewrites. Each side
// explores up to `depth` moves.
inline JoinResult joinable_bounded(const TermPtr& a, const TermPtr& b,
                                   const SearchConfig& cfg_in, std::size_t depth) {
  if (a->type != b->type) throw TypeMismatch("joinable_bounded: different cell types");
  SearchConfig cfg = cfg_in;
  cfg.use_struct = true;

  using Set = std::unordered_set<detail::TermKey, detail::TermKeyHash>;
  TermPtr ca = struct_canon(a), cb = struct_canon(b);
  Set sa{{ca}}, sb{{cb}};
  if (sb.count({ca})) return {true, ca};
  std::vector<TermPtr> fa{ca}, fb{cb};
  for (std::size_t round = 0; round < depth && (!fa.empty() || !fb.empty()); ++round) {
    for (bool side : {true, false}) {
      auto& frontier = side ? fa : fb;
      auto& mine = side ? sa : sb;
      auto& theirs = side ? sb : sa;
      std::vector<TermPtr> next;
      for (const auto& t : frontier) {
        for (const auto& s : canon_successors(t, cfg)) {
          if (theirs.count({s})) return {true, s};
          if (mine.insert({s}).second) next.push_back(s);
        }
      }
      frontier = std::move(next);
    }
  }
  return {false, nullptr};
}

}  // namespace cornering
