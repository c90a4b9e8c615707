#pragma once

#include <vector>

#include "cornering/trace.hpp"

namespace cornering {

// Left contexts take a hole <U | # -> B | #> to <V | C(x)# -> D | #.W>.
// Frames are stored innermost first; substitution folds them outward.
enum class LFrameKind : uint8_t { Par, Seq, Diamond };

struct LFrame {
  LFrameKind kind;
  TermPtr a;
};

// The context signature (V, C, D, W) evolves frame by frame.
struct LCtxSig {
  ProtocolWord v;
  ObjectWord c;
  ObjectWord d;
  ProtocolWord w;
};

struct LeftContext {
  ProtocolWord hole_left;   // U
  ObjectWord hole_bottom;   // B
  std::vector<LFrame> frames;

  LCtxSig sig() const {
    LCtxSig s{hole_left, {}, hole_bottom, {}};
    for (const auto& f : frames) {
      switch (f.kind) {
        case LFrameKind::Par:
          if (f.a->type.right != s.v)
            throw TypeMismatch("left context: par frame protocol mismatch");
          s.v = f.a->type.left;
          s.c = word_concat(f.a->type.top, s.c);
          s.d = word_concat(f.a->type.bottom, s.d);
          break;
        case LFrameKind::Seq:
          if (f.a->type.top != s.d)
            throw TypeMismatch("left context: seq frame boundary mismatch");
          s.v = proto_concat(s.v, f.a->type.left);
          s.d = f.a->type.bottom;
          s.w = proto_concat(s.w, f.a->type.right);
          break;
        case LFrameKind::Diamond:
          if (!f.a->type.top.empty())
            throw TypeMismatch("left context: diamond frame needs unit top");
          if (f.a->type.left != s.w)
            throw TypeMismatch("left context: diamond frame protocol mismatch");
          s.d = word_concat(s.d, f.a->type.bottom);
          s.w = f.a->type.right;
          break;
      }
    }
    return s;
  }

  LeftContext with_par(TermPtr a) const {
    LeftContext l = *this;
    l.frames.push_back({LFrameKind::Par, std::move(a)});
    l.sig();
    return l;
  }
  LeftContext with_seq(TermPtr a) const {
    LeftContext l = *this;
    l.frames.push_back({LFrameKind::Seq, std::move(a)});
    l.sig();
    return l;
  }
  LeftContext with_diamond(TermPtr a) const {
    LeftContext l = *this;
    l.frames.push_back({LFrameKind::Diamond, std::move(a)});
    l.sig();
    return l;
  }
};

inline LeftContext lctx_hole(ProtocolWord u, ObjectWord b) {
  return LeftContext{std::move(u), std::move(b), {}};
}

inline TermPtr lctx_subst(const LeftContext& l, const TermPtr& b) {
  if (b->type.left != l.hole_left || b->type.bottom != l.hole_bottom)
    throw TypeMismatch("left context substitution: hole boundary mismatch");
  const ProtocolWord p = b->type.right;
  TermPtr acc = b;
  for (const auto& f : l.frames) {
    switch (f.kind) {
      case LFrameKind::Par:
        acc = t_hcomp(f.a, acc);
        break;
      case LFrameKind::Seq:
        acc = t_vcomp(acc, f.a);
        break;
      case LFrameKind::Diamond:
        acc = t_hcomp(acc, t_vcomp(t_hid(p), f.a));
        break;
    }
  }
  return acc;
}

// The path of the hole inside lctx_subst(l, b).
inline Path lctx_hole_path(const LeftContext& l) {
  Path p;
  for (auto it = l.frames.rbegin(); it != l.frames.rend(); ++it)
    p.push_back(it->kind == LFrameKind::Par ? 1 : 0);
  return p;
}

inline std::size_t ctx_special_count(const LeftContext& l) {
  std::size_t n = 0;
  for (const auto& f : l.frames) n += count_special(f.a);
  return n;
}

// Right contexts are the mirror: hole <# | # -> B | U> goes to
// <#.W | #(x)C -> D | V>.
enum class RFrameKind : uint8_t { Par, Seq, Diamond };

struct RFrame {
  RFrameKind kind;
  TermPtr a;
};

struct RCtxSig {
  ProtocolWord w;
  ObjectWord c;
  ObjectWord d;
  ProtocolWord v;
};

struct RightContext {
  ProtocolWord hole_right;  // U
  ObjectWord hole_bottom;   // B
  std::vector<RFrame> frames;

  RCtxSig sig() const {
    RCtxSig s{{}, {}, hole_bottom, hole_right};
    for (const auto& f : frames) {
      switch (f.kind) {
        case RFrameKind::Par:
          if (f.a->type.left != s.v)
            throw TypeMismatch("right context: par frame protocol mismatch");
          s.v = f.a->type.right;
          s.c = word_concat(s.c, f.a->type.top);
          s.d = word_concat(s.d, f.a->type.bottom);
          break;
        case RFrameKind::Seq:
          if (f.a->type.top != s.d)
            throw TypeMismatch("right context: seq frame boundary mismatch");
          s.w = proto_concat(s.w, f.a->type.left);
          s.d = f.a->type.bottom;
          s.v = proto_concat(s.v, f.a->type.right);
          break;
        case RFrameKind::Diamond:
          if (!f.a->type.top.empty())
            throw TypeMismatch("right context: diamond frame needs unit top");
          if (f.a->type.right != s.w)
            throw TypeMismatch("right context: diamond frame protocol mismatch");
          s.d = word_concat(f.a->type.bottom, s.d);
          s.w = f.a->type.left;
          break;
      }
    }
    return s;
  }

  RightContext with_par(TermPtr a) const {
    RightContext r = *this;
    r.frames.push_back({RFrameKind::Par, std::move(a)});
    r.sig();
    return r;
  }
  RightContext with_seq(TermPtr a) const {
    RightContext r = *this;
    r.frames.push_back({RFrameKind::Seq, std::move(a)});
    r.sig();
    return r;
  }
  RightContext with_diamond(TermPtr a) const {
    RightContext r = *this;
    r.frames.push_back({RFrameKind::Diamond, std::move(a)});
    r.sig();
    return r;
  }
};

inline RightContext rctx_hole(ProtocolWord u, ObjectWord b) {
  return RightContext{std::move(u), std::move(b), {}};
}

inline TermPtr rctx_subst(const RightContext& r, const TermPtr& b) {
  if (b->type.right != r.hole_right || b->type.bottom != r.hole_bottom)
    throw TypeMismatch("right context substitution: hole boundary mismatch");
  const ProtocolWord p = b->type.left;
  TermPtr acc = b;
  for (const auto& f : r.frames) {
    switch (f.kind) {
      case RFrameKind::Par:
        acc = t_hcomp(acc, f.a);
        break;
      case RFrameKind::Seq:
        acc = t_vcomp(acc, f.a);
        break;
      case RFrameKind::Diamond:
        acc = t_hcomp(t_vcomp(t_hid(p), f.a), acc);
        break;
    }
  }
  return acc;
}

inline Path rctx_hole_path(const RightContext& r) {
  Path p;
  for (auto it = r.frames.rbegin(); it != r.frames.rend(); ++it)
    p.push_back(it->kind == RFrameKind::Diamond ? 1 : 0);
  return p;
}

inline std::size_t ctx_special_count(const RightContext& r) {
  std::size_t n = 0;
  for (const auto& f : r.frames) n += count_special(f.a);
  return n;
}

namespace detail {

// Shift steps for one frame layer; `k` counts frames still in play.
inline void lshift_steps(TraceBuilder& tb, const Path& pos, const LeftContext& l,
                         std::size_t k, const TermPtr& a, const TermPtr& b) {
  if (k == 0) {
    // a | (b . id@1)  ->  a | b
    Path p = pos;
    p.push_back(1);
    Path p1 = p;
    p1.push_back(1);
    tb.struct_step(p1, StructLaw::UnitCoincide, Orient::Fwd);
    tb.struct_step(p, StructLaw::VUnitR, Orient::Fwd);
    return;
  }
  const LFrame& f = l.frames[k - 1];
  LeftContext inner{l.hole_left, l.hole_bottom,
                    {l.frames.begin(), l.frames.begin() + static_cast<std::ptrdiff_t>(k - 1)}};
  switch (f.kind) {
    case LFrameKind::Par: {
      tb.struct_step(pos, StructLaw::HAssoc, Orient::Fwd);
      Path p = pos;
      p.push_back(1);
      lshift_steps(tb, p, l, k - 1, a, b);
      return;
    }
    case LFrameKind::Seq: {
      ProtocolWord w_inner = inner.sig().w;
      Path p11 = pos;
      p11.push_back(1);
      p11.push_back(1);
      tb.struct_step(p11, StructLaw::HIdMerge, Orient::Bwd, w_inner.size());
      Path p1 = pos;
      p1.push_back(1);
      tb.struct_step(p1, StructLaw::VAssoc, Orient::Fwd);
      tb.struct_step(pos, StructLaw::Interchange, Orient::Bwd);
      Path p0 = pos;
      p0.push_back(0);
      lshift_steps(tb, p0, l, k - 1, a, b);
      tb.struct_step(p1, StructLaw::HUnitR, Orient::Fwd);
      return;
    }
    case LFrameKind::Diamond: {
      ProtocolWord w_inner = inner.sig().w;
      tb.struct_step(pos, StructLaw::HAssoc, Orient::Fwd);
      Path p1 = pos;
      p1.push_back(1);
      tb.struct_step(p1, StructLaw::Interchange, Orient::Bwd);
      Path p10 = p1, p11 = p1;
      p10.push_back(0);
      p11.push_back(1);
      tb.struct_step(p10, StructLaw::HUnitL, Orient::Fwd);
      tb.struct_step(p11, StructLaw::HUnitR, Orient::Fwd);
      // now: L'[a] | (b . frame)
      tb.struct_step(p10, StructLaw::HUnitR, Orient::Bwd);
      tb.struct_step(p11, StructLaw::HUnitL, Orient::Bwd);
      tb.struct_step(p1, StructLaw::Interchange, Orient::Fwd);
      tb.struct_step(pos, StructLaw::HAssoc, Orient::Bwd);
      Path p0 = pos;
      p0.push_back(0);
      lshift_steps(tb, p0, l, k - 1, a, b);
      return;
    }
  }
}

inline void rshift_steps(TraceBuilder& tb, const Path& pos, const RightContext& r,
                         std::size_t k, const TermPtr& a, const TermPtr& b) {
  if (k == 0) {
    Path p = pos;
    p.push_back(0);
    Path p1 = p;
    p1.push_back(1);
    tb.struct_step(p1, StructLaw::UnitCoincide, Orient::Fwd);
    tb.struct_step(p, StructLaw::VUnitR, Orient::Fwd);
    return;
  }
  const RFrame& f = r.frames[k - 1];
  RightContext inner{r.hole_right, r.hole_bottom,
                     {r.frames.begin(), r.frames.begin() + static_cast<std::ptrdiff_t>(k - 1)}};
  switch (f.kind) {
    case RFrameKind::Par: {
      tb.struct_step(pos, StructLaw::HAssoc, Orient::Bwd);
      Path p = pos;
      p.push_back(0);
      rshift_steps(tb, p, r, k - 1, a, b);
      return;
    }
    case RFrameKind::Seq: {
      ProtocolWord w_inner = inner.sig().w;
      Path p01 = pos;
      p01.push_back(0);
      p01.push_back(1);
      tb.struct_step(p01, StructLaw::HIdMerge, Orient::Bwd, w_inner.size());
      Path p0 = pos;
      p0.push_back(0);
      tb.struct_step(p0, StructLaw::VAssoc, Orient::Fwd);
      tb.struct_step(pos, StructLaw::Interchange, Orient::Bwd);
      rshift_steps(tb, p0, r, k - 1, a, b);
      Path p1 = pos;
      p1.push_back(1);
      tb.struct_step(p1, StructLaw::HUnitL, Orient::Fwd);
      return;
    }
    case RFrameKind::Diamond: {
      tb.struct_step(pos, StructLaw::HAssoc, Orient::Bwd);
      Path p0 = pos;
      p0.push_back(0);
      tb.struct_step(p0, StructLaw::Interchange, Orient::Bwd);
      Path p00 = p0, p01 = p0;
      p00.push_back(0);
      p01.push_back(1);
      tb.struct_step(p00, StructLaw::HUnitR, Orient::Fwd);
      tb.struct_step(p01, StructLaw::HUnitL, Orient::Fwd);
      tb.struct_step(p00, StructLaw::HUnitL, Orient::Bwd);
      tb.struct_step(p01, StructLaw::HUnitR, Orient::Bwd);
      tb.struct_step(p0, StructLaw::Interchange, Orient::Fwd);
      tb.struct_step(pos, StructLaw::HAssoc, Orient::Fwd);
      Path p1 = pos;
      p1.push_back(1);
      rshift_steps(tb, p1, r, k - 1, a, b);
      return;
    }
  }
}

}  // namespace detail

// L[a] | (b . id@W)  ~  L[(a | b)], with the witnessing structural trace.
// a must fit the hole of l and b must be top-compatible with a's right
// boundary and have unit bottom.
inline std::pair<TermPtr, Trace> lshift(const LeftContext& l, const TermPtr& a,
                                        const TermPtr& b) {
  if (!b->type.bottom.empty())
    throw TypeMismatch("lshift: b must have unit bottom boundary");
  if (b->type.left != a->type.right)
    throw TypeMismatch("lshift: b does not continue a's right boundary");
  ProtocolWord w = l.sig().w;
  TermPtr start = t_hcomp(lctx_subst(l, a), t_vcomp(b, t_hid(w)));
  TraceBuilder tb(start);
  detail::lshift_steps(tb, {}, l, l.frames.size(), a, b);
  TermPtr expect = lctx_subst(l, t_hcomp(a, b));
  if (!term_eq(tb.current(), expect))
    throw Error("lshift: trace did not arrive at the shifted context");
  return {tb.current(), tb.finish()};
}

// (b . id@W) | R[a]  ~  R[(b | a)].
inline std::pair<TermPtr, Trace> rshift(const RightContext& r, const TermPtr& a,
                                        const TermPtr& b) {
  if (!b->type.bottom.empty())
    throw TypeMismatch("rshift: b must have unit bottom boundary");
  if (b->type.right != a->type.left)
    throw TypeMismatch("rshift: b does not continue a's left boundary");
  ProtocolWord w = r.sig().w;
  TermPtr start = t_hcomp(t_vcomp(b, t_hid(w)), rctx_subst(r, a));
  TraceBuilder tb(start);
  detail::rshift_steps(tb, {}, r, r.frames.size(), a, b);
  TermPtr expect = rctx_subst(r, t_hcomp(b, a));
  if (!term_eq(tb.current(), expect))
    throw Error("rshift: trace did not arrive at the shifted context");
  return {tb.current(), tb.finish()};
}

}  // namespace cornering
