#pragma once

#include "cornering/canon.hpp"
#include "cornering/gen.hpp"
#include "cornering/reduce.hpp"

namespace cornering {

// Extraction of the underlying base morphism from a vertical term with
// no special cells. Inverse to the base embedding up to the basic
// equations.
inline BaseMor phi(const TermPtr& a) {
  if (!is_vertical(a)) throw NotVertical("phi: term has nontrivial protocols");
  if (a->specials != 0) throw NotZeroSpecial("phi: term contains special cells");
  switch (a->kind) {
    case TermKind::Base:
      return a->base;
    case TermKind::VId:
      return mor_id(a->obj);
    case TermKind::HId:
      // In a vertical zero-special term every horizontal identity is id@1.
      if (!a->proto.empty())
        throw NotZeroSpecial("phi: non-unit horizontal identity");
      return mor_id({});
    case TermKind::VComp:
      return mor_comp(phi(a->fst), phi(a->snd));
    case TermKind::HComp:
      return mor_tensor(phi(a->fst), phi(a->snd));
    default:
      throw NotZeroSpecial("phi: special constructor");
  }
}

struct VerticalNormal {
  BaseMor f;
  Trace trace;
};

// Normalizes a vertical term to a plain base cell; with rules, also
// reduces the result under the base rewrite relation.
inline VerticalNormal normalize_vertical(const TermPtr& a,
                                         const std::vector<BaseRule>& rules = {},
                                         const ReduceConfig& cfg = {}) {
  if (!is_vertical(a)) throw NotVertical("normalize_vertical: boundaries not trivial");
  ReduceResult r = reduce_combined(a, rules, cfg);
  if (r.term->kind != TermKind::Base)
    throw ShapeViolation("normalize_vertical: vertical term did not flatten");
  return {r.term->base, r.trace};
}

// Equality of vertical cells: sound and complete without rules, and the
// natural extension under a confluent terminating base relation.
inline bool decide_vertical_eq(const TermPtr& a, const TermPtr& b,
                               const std::vector<BaseRule>& rules = {}) {
  if (a->type != b->type) throw TypeMismatch("decide_vertical_eq: different types");
  if (!is_vertical(a)) throw NotVertical("decide_vertical_eq: not vertical");
  return base_eq(normalize_vertical(a, rules).f, normalize_vertical(b, rules).f);
}

struct CceConfig {
  std::uint64_t seed = 0;
  std::size_t samples = 12;
  std::size_t context_size = 10;
};

struct CceOutcome {
  bool consistent = true;
  TermPtr counter_l;
  TermPtr counter_r;
};

// Samples closing contexts l | - | r and compares the two normal forms.
// A counterexample refutes closed-context equivalence; agreement on all
// samples is evidence, not proof.
inline CceOutcome cce_test(const TermPtr& a, const TermPtr& b, const Signature& sig,
                           const CceConfig& cfg = {}) {
  if (a->type != b->type) throw TypeMismatch("cce_test: different cell types");
  for (std::size_t i = 0; i < cfg.samples; ++i) {
    TermGen g(sig, cfg.seed * 1000003 + i, cfg.context_size);
    TermPtr l = g.left_participant_for(a->type.left);
    TermPtr r = g.right_participant_for(a->type.right);
    TermPtr la = t_hcomp(t_hcomp(l, a), r);
    TermPtr lb = t_hcomp(t_hcomp(l, b), r);
    if (!base_eq(normalize_vertical(la).f, normalize_vertical(lb).f))
      return {false, l, r};
  }
  return {true, nullptr, nullptr};
}

}  // namespace cornering
