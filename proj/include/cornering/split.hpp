#pragma once

#include <functional>

#include "cornering/engine.hpp"

namespace cornering {

// Pure computation of the decomposition pair for b | L[c]: terms
// lambda0, lambda1 such that b | L[c] rewrites to (lambda0 | c) . lambda1
// for every hole filler c. The witnessing trace for a concrete c is
// produced by the split algorithm below.
struct CtxDecomp {
  TermPtr lambda0;
  TermPtr lambda1;
};

struct SplitResult {
  TermPtr a0;
  TermPtr a1;
  Trace trace;
};

enum class SplitSide : uint8_t { LeftClosed, RightClosed };

namespace detail {

SplitResult split_left_run(const TermPtr& a, std::size_t k, std::size_t budget);
SplitResult split_right_run(const TermPtr& a, std::size_t k, std::size_t budget);

// Decomposition against a left context, peeling the outermost frame.
// Transforms the subterm at pos, currently b | L'[c], into
// (lambda0 | c) . lambda1 and returns the lambdas. `budget` is the
// special-count bound inherited from the enclosing split.
inline CtxDecomp ctx_decompose_left_run(TraceBuilder& tb, const Path& pos,
                                        const LeftContext& l, std::size_t k,
                                        const TermPtr& b, const TermPtr& c,
                                        std::size_t budget) {
  LeftContext sub{l.hole_left, l.hole_bottom,
                  {l.frames.begin(), l.frames.begin() + static_cast<std::ptrdiff_t>(k)}};
  if (count_special(b) + ctx_special_count(sub) >= budget)
    throw BudgetExceeded("context decomposition exceeded its special budget");
  if (k == 0) {
    // b | c  ->  (b | c) . 1
    tb.struct_step(pos, StructLaw::VUnitR, Orient::Bwd);
    TermPtr whole = subterm_at(tb.current(), pos);
    return {b, whole->snd};
  }
  const LFrame& f = l.frames[k - 1];
  switch (f.kind) {
    case LFrameKind::Par: {
      // b | (a | L''[c])  ->  (b | a) | L''[c]
      tb.struct_step(pos, StructLaw::HAssoc, Orient::Bwd);
      TermPtr merged = subterm_at(tb.current(), pos)->fst;
      return ctx_decompose_left_run(tb, pos, l, k - 1, merged, c, budget);
    }
    case LFrameKind::Seq: {
      // split b against the inner context's left boundary
      LeftContext inner{l.hole_left, l.hole_bottom,
                        {l.frames.begin(),
                         l.frames.begin() + static_cast<std::ptrdiff_t>(k - 1)}};
      std::size_t cut = inner.sig().v.size();
      SplitResult sb = split_left_run(b, cut, budget);
      Path p0 = pos;
      p0.push_back(0);
      tb.splice(sb.trace, p0);
      tb.struct_step(pos, StructLaw::Interchange, Orient::Bwd);
      CtxDecomp inner_d =
          ctx_decompose_left_run(tb, p0, l, k - 1, sb.a0, c, budget);
      tb.struct_step(pos, StructLaw::VAssoc, Orient::Bwd);
      TermPtr whole = subterm_at(tb.current(), pos);
      return {inner_d.lambda0, whole->snd};
    }
    case LFrameKind::Diamond: {
      // b | (L''[c] | (id@P . a))  ->  (b | L''[c]) | (id@P . a)
      tb.struct_step(pos, StructLaw::HAssoc, Orient::Bwd);
      Path p0 = pos;
      p0.push_back(0);
      CtxDecomp inner_d = ctx_decompose_left_run(tb, p0, l, k - 1, b, c, budget);
      tb.struct_step(pos, StructLaw::Interchange, Orient::Bwd);
      Path q0 = pos;
      q0.push_back(0);
      tb.struct_step(q0, StructLaw::HUnitR, Orient::Fwd);
      TermPtr whole = subterm_at(tb.current(), pos);
      return {inner_d.lambda0, whole->snd};
    }
  }
  throw Error("ctx_decompose: unreachable");
}

inline CtxDecomp ctx_decompose_right_run(TraceBuilder& tb, const Path& pos,
                                         const RightContext& r, std::size_t k,
                                         const TermPtr& b, const TermPtr& c,
                                         std::size_t budget) {
  RightContext sub{r.hole_right, r.hole_bottom,
                   {r.frames.begin(), r.frames.begin() + static_cast<std::ptrdiff_t>(k)}};
  if (count_special(b) + ctx_special_count(sub) >= budget)
    throw BudgetExceeded("context decomposition exceeded its special budget");
  if (k == 0) {
    tb.struct_step(pos, StructLaw::VUnitR, Orient::Bwd);
    TermPtr whole = subterm_at(tb.current(), pos);
    return {b, whole->snd};
  }
  const RFrame& f = r.frames[k - 1];
  switch (f.kind) {
    case RFrameKind::Par: {
      // (R''[c] | a) | b  ->  R''[c] | (a | b)
      tb.struct_step(pos, StructLaw::HAssoc, Orient::Fwd);
      TermPtr merged = subterm_at(tb.current(), pos)->snd;
      return ctx_decompose_right_run(tb, pos, r, k - 1, merged, c, budget);
    }
    case RFrameKind::Seq: {
      RightContext inner{r.hole_right, r.hole_bottom,
                         {r.frames.begin(),
                          r.frames.begin() + static_cast<std::ptrdiff_t>(k - 1)}};
      std::size_t inner_v = inner.sig().v.size();
      // b's left boundary is V_inner . V_frame; cut after V_inner.
      SplitResult sb = split_right_run(b, inner_v, budget);
      Path p1 = pos;
      p1.push_back(1);
      tb.splice(sb.trace, p1);
      tb.struct_step(pos, StructLaw::Interchange, Orient::Bwd);
      Path p0 = pos;
      p0.push_back(0);
      CtxDecomp inner_d =
          ctx_decompose_right_run(tb, p0, r, k - 1, sb.a0, c, budget);
      tb.struct_step(pos, StructLaw::VAssoc, Orient::Bwd);
      TermPtr whole = subterm_at(tb.current(), pos);
      return {inner_d.lambda0, whole->snd};
    }
    case RFrameKind::Diamond: {
      // ((id@P . a) | R''[c]) | b  ->  (id@P . a) | (R''[c] | b)
      tb.struct_step(pos, StructLaw::HAssoc, Orient::Fwd);
      Path p1 = pos;
      p1.push_back(1);
      CtxDecomp inner_d = ctx_decompose_right_run(tb, p1, r, k - 1, b, c, budget);
      tb.struct_step(pos, StructLaw::Interchange, Orient::Bwd);
      Path q0 = pos;
      q0.push_back(0);
      tb.struct_step(q0, StructLaw::HUnitL, Orient::Fwd);
      TermPtr whole = subterm_at(tb.current(), pos);
      return {inner_d.lambda0, whole->snd};
    }
  }
  throw Error("ctx_decompose: unreachable");
}

// Splits a left-closed a : <1 | A -> B | U.V> as a0 . a1 with |U| = k
// leading atoms on a0. `budget` bounds the special counts seen along the
// recursion; the top-level call passes the term's own count plus one.
inline SplitResult split_left_run(const TermPtr& a, std::size_t k,
                                  std::size_t budget) {
  if (!a->type.left.empty()) throw NotClosed("split: term is not left-closed");
  if (k > a->type.right.size()) throw InvalidPosition("split point out of range");
  if (k == 0) {
    TraceBuilder tb(a);
    tb.struct_step({}, StructLaw::VUnitL, Orient::Bwd);
    TermPtr whole = tb.current();
    return {whole->fst, whole->snd, tb.finish()};
  }
  if (a->specials >= budget)
    throw BudgetExceeded("split exceeded its special budget");
  PopResult pr = pop(a);
  TraceBuilder tb(a);
  tb.splice(pr.trace, {});
  const PoppedForm& p = pr.form;
  const ProtocolAtom& head = a->type.right[0];

  switch (head.kind) {
    case ProtoKind::Send: {
      if (p.shape != PopShape::SendRight)
        throw Error("split: expected a send stage at the boundary");
      SplitResult sub = split_left_run(p.residual, k - 1, a->specials);
      tb.splice(sub.trace, {1});
      tb.struct_step({}, StructLaw::VAssoc, Orient::Fwd);
      TermPtr whole = tb.current();
      return {whole->fst, whole->snd, tb.finish()};
    }
    case ProtoKind::Recv: {
      if (p.shape != PopShape::RecvRight)
        throw Error("split: expected a receive stage at the boundary");
      SplitResult sub = split_left_run(p.residual, k - 1, a->specials);
      tb.splice(sub.trace, {1});
      tb.struct_step({}, StructLaw::VAssoc, Orient::Fwd);
      TermPtr whole = tb.current();
      return {whole->fst, whole->snd, tb.finish()};
    }
    case ProtoKind::Plus: {
      if (p.shape != PopShape::InjStage)
        throw Error("split: expected an injection stage at the boundary");
      std::size_t ui = (p.index == 0 ? p.u0 : p.u1).size();
      SplitResult sub = split_left_run(p.residual, ui + k - 1, a->specials);
      tb.splice(sub.trace, {0});
      // (b0 . b1) | (inj . id@(U'.V))  ->  (b0 | (inj . id@U')) . b1
      std::size_t u_rest = k - 1;
      tb.struct_step({1, 1}, StructLaw::HIdMerge, Orient::Bwd, u_rest);
      tb.struct_step({1}, StructLaw::VAssoc, Orient::Fwd);
      tb.struct_step({}, StructLaw::Interchange, Orient::Bwd);
      tb.struct_step({1}, StructLaw::HUnitR, Orient::Fwd);
      TermPtr whole = tb.current();
      return {whole->fst, whole->snd, tb.finish()};
    }
    case ProtoKind::Times: {
      if (p.shape != PopShape::ProdCtx)
        throw Error("split: expected a product context at the boundary");
      // [f] . L[x]: decompose the context, then split the tail.
      tb.struct_step({1}, StructLaw::HUnitL, Orient::Bwd);
      TermPtr b0 = subterm_at(tb.current(), {1, 0});
      CtxDecomp d = detail::ctx_decompose_left_run(tb, {1}, p.lctx,
                                                   p.lctx.frames.size(), b0,
                                                   p.hole, a->specials);
      // now: [f] . ((lambda0 | x) . lambda1)
      SplitResult sub = split_left_run(d.lambda1, k - 1, a->specials);
      tb.splice(sub.trace, {1, 1});
      tb.struct_step({1}, StructLaw::VAssoc, Orient::Fwd);
      tb.struct_step({}, StructLaw::VAssoc, Orient::Fwd);
      TermPtr whole = tb.current();
      return {whole->fst, whole->snd, tb.finish()};
    }
  }
  throw Error("split: unreachable");
}

inline SplitResult split_right_run(const TermPtr& a, std::size_t k,
                                   std::size_t budget) {
  if (!a->type.right.empty()) throw NotClosed("split: term is not right-closed");
  if (k > a->type.left.size()) throw InvalidPosition("split point out of range");
  if (k == 0) {
    TraceBuilder tb(a);
    tb.struct_step({}, StructLaw::VUnitL, Orient::Bwd);
    TermPtr whole = tb.current();
    return {whole->fst, whole->snd, tb.finish()};
  }
  if (a->specials >= budget)
    throw BudgetExceeded("split exceeded its special budget");
  PopResult pr = pop(a);
  TraceBuilder tb(a);
  tb.splice(pr.trace, {});
  const PoppedForm& p = pr.form;
  const ProtocolAtom& head = a->type.left[0];

  switch (head.kind) {
    case ProtoKind::Send: {
      if (p.shape != PopShape::RecvLeft)
        throw Error("split: expected a receive stage at the boundary");
      SplitResult sub = split_right_run(p.residual, k - 1, a->specials);
      tb.splice(sub.trace, {1});
      tb.struct_step({}, StructLaw::VAssoc, Orient::Fwd);
      TermPtr whole = tb.current();
      return {whole->fst, whole->snd, tb.finish()};
    }
    case ProtoKind::Recv: {
      if (p.shape != PopShape::SendLeft)
        throw Error("split: expected a send stage at the boundary");
      SplitResult sub = split_right_run(p.residual, k - 1, a->specials);
      tb.splice(sub.trace, {1});
      tb.struct_step({}, StructLaw::VAssoc, Orient::Fwd);
      TermPtr whole = tb.current();
      return {whole->fst, whole->snd, tb.finish()};
    }
    case ProtoKind::Times: {
      if (p.shape != PopShape::ProjStage)
        throw Error("split: expected a projection stage at the boundary");
      std::size_t ui = (p.index == 0 ? p.u0 : p.u1).size();
      SplitResult sub = split_right_run(p.residual, ui + k - 1, a->specials);
      tb.splice(sub.trace, {1});
      std::size_t u_rest = k - 1;
      tb.struct_step({0, 1}, StructLaw::HIdMerge, Orient::Bwd, u_rest);
      tb.struct_step({0}, StructLaw::VAssoc, Orient::Fwd);
      tb.struct_step({}, StructLaw::Interchange, Orient::Bwd);
      tb.struct_step({1}, StructLaw::HUnitL, Orient::Fwd);
      TermPtr whole = tb.current();
      return {whole->fst, whole->snd, tb.finish()};
    }
    case ProtoKind::Plus: {
      if (p.shape != PopShape::SumCtx)
        throw Error("split: expected a sum context at the boundary");
      tb.struct_step({1}, StructLaw::HUnitR, Orient::Bwd);
      TermPtr b0 = subterm_at(tb.current(), {1, 1});
      CtxDecomp d = detail::ctx_decompose_right_run(tb, {1}, p.rctx,
                                                    p.rctx.frames.size(), b0,
                                                    p.hole, a->specials);
      SplitResult sub = split_right_run(d.lambda1, k - 1, a->specials);
      tb.splice(sub.trace, {1, 1});
      tb.struct_step({1}, StructLaw::VAssoc, Orient::Fwd);
      tb.struct_step({}, StructLaw::VAssoc, Orient::Fwd);
      TermPtr whole = tb.current();
      return {whole->fst, whole->snd, tb.finish()};
    }
  }
  throw Error("split: unreachable");
}

}  // namespace detail

// Vertically decomposes a closed term along its nontrivial protocol
// boundary, splitting off the first k atoms.
inline SplitResult split_base(const TermPtr& a, SplitSide side, std::size_t k) {
  if (side == SplitSide::LeftClosed) {
    if (!a->type.left.empty())
      throw NotClosed("split_base: left boundary is not trivial");
    return detail::split_left_run(a, k, a->specials + 1);
  }
  if (!a->type.right.empty())
    throw NotClosed("split_base: right boundary is not trivial");
  return detail::split_right_run(a, k, a->specials + 1);
}

// The decomposition pair alone, without a witnessing trace; the
// universally quantified rewrite is checked per instance in tests.
inline CtxDecomp context_decompose(const LeftContext& l, const TermPtr& b) {
  CtxDecomp d{b, nullptr};
  // Fold the frames from the hole outward, mirroring the trace builder.
  std::function<CtxDecomp(std::size_t, const TermPtr&)> go =
      [&](std::size_t k, const TermPtr& cur) -> CtxDecomp {
    LeftContext sub{l.hole_left, l.hole_bottom,
                    {l.frames.begin(), l.frames.begin() + static_cast<std::ptrdiff_t>(k)}};
    if (k == 0) {
      ObjectWord bot = word_concat(cur->type.bottom, l.hole_bottom);
      return {cur, t_vid(bot)};
    }
    const LFrame& f = l.frames[k - 1];
    switch (f.kind) {
      case LFrameKind::Par:
        return go(k - 1, t_hcomp(cur, f.a));
      case LFrameKind::Seq: {
        LeftContext inner{l.hole_left, l.hole_bottom,
                          {l.frames.begin(),
                           l.frames.begin() + static_cast<std::ptrdiff_t>(k - 1)}};
        SplitResult sb = detail::split_left_run(cur, inner.sig().v.size(),
                                                cur->specials + 1);
        CtxDecomp in = go(k - 1, sb.a0);
        return {in.lambda0, t_vcomp(in.lambda1, t_hcomp(sb.a1, f.a))};
      }
      case LFrameKind::Diamond: {
        CtxDecomp in = go(k - 1, cur);
        return {in.lambda0, t_hcomp(in.lambda1, f.a)};
      }
    }
    throw Error("context_decompose: unreachable");
  };
  return go(l.frames.size(), b);
}

}  // namespace cornering
