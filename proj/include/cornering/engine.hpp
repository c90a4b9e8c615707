#pragma once

#include <algorithm>
#include <optional>
#include <random>
#include <vector>

#include "cornering/context.hpp"

namespace cornering {

// The ten popped shapes. A term in popped form either is a plain base
// cell or exposes exactly one special cell at its surface.
enum class PopShape : uint8_t {
  Flat,       // [f]
  IdStage,    // ([f] . id@P) . a          with P a non-unit atom
  RecvLeft,   // (A^> | 1@B) . a
  RecvRight,  // (1@B | A^<) . a
  SendLeft,   // ([f] . (A_< | 1@B)) . a
  SendRight,  // ([f] . (1@B | A_>)) . a
  ProjStage,  // (proj{i} . id@W) | a
  InjStage,   // a | (inj{i} . id@W)
  ProdCtx,    // [f] . L[b0 (x) b1]
  SumCtx,     // [f] . R[b0 (+) b1]
};

inline const char* pop_shape_name(PopShape s) {
  switch (s) {
    case PopShape::Flat: return "flat";
    case PopShape::IdStage: return "id_stage";
    case PopShape::RecvLeft: return "recv_left";
    case PopShape::RecvRight: return "recv_right";
    case PopShape::SendLeft: return "send_left";
    case PopShape::SendRight: return "send_right";
    case PopShape::ProjStage: return "proj_stage";
    case PopShape::InjStage: return "inj_stage";
    case PopShape::ProdCtx: return "prod_ctx";
    case PopShape::SumCtx: return "sum_ctx";
  }
  return "?";
}

struct PoppedForm {
  PopShape shape = PopShape::Flat;
  BaseMor f;               // Flat, IdStage, SendLeft, SendRight, ProdCtx, SumCtx
  ProtocolAtom atom;       // IdStage
  ObjectWord corner_obj;   // corner shapes
  ObjectWord whisker;      // corner shapes: the 1@B padding
  int index = 0;           // ProjStage, InjStage
  ProtocolWord u0, u1, w;  // ProjStage, InjStage
  TermPtr residual;        // the trailing or flanking term a
  LeftContext lctx{};      // ProdCtx
  RightContext rctx{};     // SumCtx
  TermPtr hole;            // ProdCtx / SumCtx: the pairing subterm
};

namespace detail {

// Parses t as a left-context substitution around a product subterm.
inline bool parse_lctx(const TermPtr& t, std::vector<LFrame>& frames, TermPtr& hole) {
  if (t->kind == TermKind::Prod) {
    hole = t;
    return true;
  }
  if (t->kind == TermKind::VComp) {  // L'[x] . a
    if (parse_lctx(t->fst, frames, hole)) {
      frames.push_back({LFrameKind::Seq, t->snd});
      return true;
    }
    return false;
  }
  if (t->kind == TermKind::HComp) {
    // Diamond: L'[x] | (id@P . a), with P the hole's right boundary.
    if (t->snd->kind == TermKind::VComp && t->snd->fst->kind == TermKind::HId &&
        t->snd->snd->type.top.empty()) {
      std::vector<LFrame> attempt = frames;
      TermPtr h;
      if (parse_lctx(t->fst, attempt, h) &&
          t->snd->fst->proto == h->type.right) {
        attempt.push_back({LFrameKind::Diamond, t->snd->snd});
        frames = std::move(attempt);
        hole = h;
        return true;
      }
    }
    // Par: a | L'[x]
    if (parse_lctx(t->snd, frames, hole)) {
      frames.push_back({LFrameKind::Par, t->fst});
      return true;
    }
    return false;
  }
  return false;
}

inline bool parse_rctx(const TermPtr& t, std::vector<RFrame>& frames, TermPtr& hole) {
  if (t->kind == TermKind::Sum) {
    hole = t;
    return true;
  }
  if (t->kind == TermKind::VComp) {  // R'[x] . a
    if (parse_rctx(t->fst, frames, hole)) {
      frames.push_back({RFrameKind::Seq, t->snd});
      return true;
    }
    return false;
  }
  if (t->kind == TermKind::HComp) {
    // Diamond: (id@P . a) | R'[x]
    if (t->fst->kind == TermKind::VComp && t->fst->fst->kind == TermKind::HId &&
        t->fst->snd->type.top.empty()) {
      std::vector<RFrame> attempt = frames;
      TermPtr h;
      if (parse_rctx(t->snd, attempt, h) && t->fst->fst->proto == h->type.left) {
        attempt.push_back({RFrameKind::Diamond, t->fst->snd});
        frames = std::move(attempt);
        hole = h;
        return true;
      }
    }
    // Par: R'[x] | a
    if (parse_rctx(t->fst, frames, hole)) {
      frames.push_back({RFrameKind::Par, t->snd});
      return true;
    }
    return false;
  }
  return false;
}

}  // namespace detail

// Shape recognizer; returns a descriptor when t matches one of the
// popped shapes.
inline std::optional<PoppedForm> is_popped(const TermPtr& t) {
  PoppedForm p;
  if (t->kind == TermKind::Base) {
    p.shape = PopShape::Flat;
    p.f = t->base;
    return p;
  }
  if (t->kind == TermKind::VComp) {
    const TermPtr &head = t->fst, &rest = t->snd;
    // ([f] . id@P) . a
    if (head->kind == TermKind::VComp && head->fst->kind == TermKind::Base &&
        head->snd->kind == TermKind::HId && head->snd->proto.size() == 1) {
      p.shape = PopShape::IdStage;
      p.f = head->fst->base;
      p.atom = head->snd->proto[0];
      p.residual = rest;
      return p;
    }
    // (A^> | 1@B) . a
    if (head->kind == TermKind::HComp && head->fst->kind == TermKind::CornerUR &&
        head->snd->kind == TermKind::VId) {
      p.shape = PopShape::RecvLeft;
      p.corner_obj = head->fst->obj;
      p.whisker = head->snd->obj;
      p.residual = rest;
      return p;
    }
    // (1@B | A^<) . a
    if (head->kind == TermKind::HComp && head->fst->kind == TermKind::VId &&
        head->snd->kind == TermKind::CornerUL) {
      p.shape = PopShape::RecvRight;
      p.corner_obj = head->snd->obj;
      p.whisker = head->fst->obj;
      p.residual = rest;
      return p;
    }
    // ([f] . (A_< | 1@B)) . a   and   ([f] . (1@B | A_>)) . a
    if (head->kind == TermKind::VComp && head->fst->kind == TermKind::Base &&
        head->snd->kind == TermKind::HComp) {
      const TermPtr &x = head->snd->fst, &y = head->snd->snd;
      if (x->kind == TermKind::CornerLR && y->kind == TermKind::VId) {
        p.shape = PopShape::SendLeft;
        p.f = head->fst->base;
        p.corner_obj = x->obj;
        p.whisker = y->obj;
        p.residual = rest;
        return p;
      }
      if (x->kind == TermKind::VId && y->kind == TermKind::CornerLL) {
        p.shape = PopShape::SendRight;
        p.f = head->fst->base;
        p.corner_obj = y->obj;
        p.whisker = x->obj;
        p.residual = rest;
        return p;
      }
    }
    // [f] . L[b0 (x) b1]   and   [f] . R[b0 (+) b1]
    if (head->kind == TermKind::Base) {
      std::vector<LFrame> lf;
      TermPtr hole;
      if (detail::parse_lctx(rest, lf, hole)) {
        LeftContext l{hole->type.left, hole->type.bottom, lf};
        try {
          l.sig();
          if (term_eq(lctx_subst(l, hole), rest)) {
            p.shape = PopShape::ProdCtx;
            p.f = head->base;
            p.lctx = l;
            p.hole = hole;
            return p;
          }
        } catch (const TypeMismatch&) {
        }
      }
      std::vector<RFrame> rf;
      if (detail::parse_rctx(rest, rf, hole)) {
        RightContext r{hole->type.right, hole->type.bottom, rf};
        try {
          r.sig();
          if (term_eq(rctx_subst(r, hole), rest)) {
            p.shape = PopShape::SumCtx;
            p.f = head->base;
            p.rctx = r;
            p.hole = hole;
            return p;
          }
        } catch (const TypeMismatch&) {
        }
      }
    }
    return std::nullopt;
  }
  if (t->kind == TermKind::HComp) {
    // (proj{i} . id@W) | a
    if (t->fst->kind == TermKind::VComp && t->fst->fst->kind == TermKind::Proj &&
        t->fst->snd->kind == TermKind::HId) {
      p.shape = PopShape::ProjStage;
      p.index = t->fst->fst->index;
      p.u0 = t->fst->fst->proto;
      p.u1 = t->fst->fst->proto2;
      p.w = t->fst->snd->proto;
      p.residual = t->snd;
      return p;
    }
    // a | (inj{i} . id@W)
    if (t->snd->kind == TermKind::VComp && t->snd->fst->kind == TermKind::Inj &&
        t->snd->snd->kind == TermKind::HId) {
      p.shape = PopShape::InjStage;
      p.index = t->snd->fst->index;
      p.u0 = t->snd->fst->proto;
      p.u1 = t->snd->fst->proto2;
      p.w = t->snd->snd->proto;
      p.residual = t->fst;
      return p;
    }
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------
// The normalizer. Rewrites any well-typed term to popped form with a
// replayable trace of interaction and structural steps. The recursion
// follows the well-founded order that combines the special count with
// the subterm relation: every recursive call is on a direct subterm with
// no greater special count, or on a term whose special count strictly
// dropped after an interaction step.

struct PopResult {
  TermPtr term;
  PoppedForm form;
  Trace trace;
};

class PopEngine {
 public:
  explicit PopEngine(std::size_t depth_cap = 65536) : depth_cap_(depth_cap) {}

  PopResult pop(const TermPtr& a) {
    depth_ = 0;
    return run(a, a->specials + 1, true);
  }

 private:
  std::size_t depth_cap_;
  std::size_t depth_ = 0;

  // fuse 1@B | 1@C into 1@(B*C) at pos, via the base embedding
  static void fuse_ones(TraceBuilder& tb, Path pos) {
    Path p0 = pos, p1 = pos;
    p0.push_back(0);
    p1.push_back(1);
    tb.struct_step(p0, StructLaw::VIdFlat, Orient::Fwd);
    tb.struct_step(p1, StructLaw::VIdFlat, Orient::Fwd);
    tb.struct_step(pos, StructLaw::FusePar, Orient::Fwd);
    tb.struct_step(pos, StructLaw::VIdFlat, Orient::Bwd);
  }

  // [f] | 1@C -> [f * 1@C]   (keeps the Base leaf)
  static void fuse_base_one(TraceBuilder& tb, Path pos) {
    Path p1 = pos;
    p1.push_back(1);
    tb.struct_step(p1, StructLaw::VIdFlat, Orient::Fwd);
    tb.struct_step(pos, StructLaw::FusePar, Orient::Fwd);
  }

  // 1@C | [f] -> [1@C * f]
  static void fuse_one_base(TraceBuilder& tb, Path pos) {
    Path p0 = pos;
    p0.push_back(0);
    tb.struct_step(p0, StructLaw::VIdFlat, Orient::Fwd);
    tb.struct_step(pos, StructLaw::FusePar, Orient::Fwd);
  }

  static Path at(Path base, std::initializer_list<int> tail) {
    base.insert(base.end(), tail.begin(), tail.end());
    return base;
  }

  PopResult run(const TermPtr& a, std::size_t parent_bound, bool structural) {
    if (++depth_ > depth_cap_)
      throw Error("pop: recursion depth cap exceeded");
    if (structural) {
      if (a->specials >= parent_bound)
        throw Error("pop: recursion order violated (structural)");
    } else if (a->specials >= parent_bound) {
      throw Error("pop: recursion order violated (beta)");
    }
    TraceBuilder tb(a);
#ifdef CORNERING_POP_DEBUG
    PoppedForm form;
    try {
      form = dispatch(tb, a);
    } catch (const Error& e) {
      fprintf(stderr, "pop dispatch failed on kind %d: %s\n  term: %s\n",
              static_cast<int>(a->kind), e.what(), term_str(a).c_str());
      throw;
    }
#else
    PoppedForm form = dispatch(tb, a);
#endif
    PopResult r{tb.current(), form, tb.finish()};
    if (!is_popped(r.term))
      throw Error("pop: result fails the shape recognizer");
    --depth_;
    return r;
  }

  PoppedForm dispatch(TraceBuilder& tb, const TermPtr& a) {
    switch (a->kind) {
      case TermKind::Base: {
        PoppedForm p;
        p.shape = PopShape::Flat;
        p.f = a->base;
        return p;
      }
      case TermKind::VId: {
        tb.struct_step({}, StructLaw::VIdFlat, Orient::Fwd);
        PoppedForm p;
        p.shape = PopShape::Flat;
        p.f = tb.current()->base;
        return p;
      }
      case TermKind::HId:
        return pop_hid(tb, a);
      case TermKind::CornerUR: {
        tb.struct_step({}, StructLaw::HUnitR, Orient::Bwd);
        tb.struct_step({1}, StructLaw::UnitCoincide, Orient::Fwd);
        tb.struct_step({}, StructLaw::VUnitR, Orient::Bwd);
        PoppedForm p;
        p.shape = PopShape::RecvLeft;
        p.corner_obj = a->obj;
        p.whisker = {};
        p.residual = tb.current()->snd;
        return p;
      }
      case TermKind::CornerUL: {
        tb.struct_step({}, StructLaw::HUnitL, Orient::Bwd);
        tb.struct_step({0}, StructLaw::UnitCoincide, Orient::Fwd);
        tb.struct_step({}, StructLaw::VUnitR, Orient::Bwd);
        PoppedForm p;
        p.shape = PopShape::RecvRight;
        p.corner_obj = a->obj;
        p.whisker = {};
        p.residual = tb.current()->snd;
        return p;
      }
      case TermKind::CornerLR: {
        tb.struct_step({}, StructLaw::VUnitL, Orient::Bwd);
        tb.struct_step({0}, StructLaw::VIdFlat, Orient::Fwd);
        tb.struct_step({1}, StructLaw::HUnitR, Orient::Bwd);
        tb.struct_step({1, 1}, StructLaw::UnitCoincide, Orient::Fwd);
        tb.struct_step({}, StructLaw::VUnitR, Orient::Bwd);
        PoppedForm p;
        p.shape = PopShape::SendLeft;
        p.f = mor_id(a->obj);
        p.corner_obj = a->obj;
        p.whisker = {};
        p.residual = tb.current()->snd;
        return p;
      }
      case TermKind::CornerLL: {
        tb.struct_step({}, StructLaw::VUnitL, Orient::Bwd);
        tb.struct_step({0}, StructLaw::VIdFlat, Orient::Fwd);
        tb.struct_step({1}, StructLaw::HUnitL, Orient::Bwd);
        tb.struct_step({1, 0}, StructLaw::UnitCoincide, Orient::Fwd);
        tb.struct_step({}, StructLaw::VUnitR, Orient::Bwd);
        PoppedForm p;
        p.shape = PopShape::SendRight;
        p.f = mor_id(a->obj);
        p.corner_obj = a->obj;
        p.whisker = {};
        p.residual = tb.current()->snd;
        return p;
      }
      case TermKind::Proj: {
        tb.struct_step({}, StructLaw::VUnitR, Orient::Bwd);
        tb.struct_step({1}, StructLaw::UnitCoincide, Orient::Bwd);
        tb.struct_step({}, StructLaw::HUnitR, Orient::Bwd);
        PoppedForm p;
        p.shape = PopShape::ProjStage;
        p.index = a->index;
        p.u0 = a->proto;
        p.u1 = a->proto2;
        p.w = {};
        p.residual = tb.current()->snd;
        return p;
      }
      case TermKind::Inj: {
        tb.struct_step({}, StructLaw::VUnitR, Orient::Bwd);
        tb.struct_step({1}, StructLaw::UnitCoincide, Orient::Bwd);
        tb.struct_step({}, StructLaw::HUnitL, Orient::Bwd);
        PoppedForm p;
        p.shape = PopShape::InjStage;
        p.index = a->index;
        p.u0 = a->proto;
        p.u1 = a->proto2;
        p.w = {};
        p.residual = tb.current()->fst;
        return p;
      }
      case TermKind::Prod: {
        tb.struct_step({}, StructLaw::VUnitL, Orient::Bwd);
        tb.struct_step({0}, StructLaw::VIdFlat, Orient::Fwd);
        PoppedForm p;
        p.shape = PopShape::ProdCtx;
        p.f = mor_id(a->type.top);
        p.lctx = lctx_hole(a->type.left, a->type.bottom);
        p.hole = a;
        return p;
      }
      case TermKind::Sum: {
        tb.struct_step({}, StructLaw::VUnitL, Orient::Bwd);
        tb.struct_step({0}, StructLaw::VIdFlat, Orient::Fwd);
        PoppedForm p;
        p.shape = PopShape::SumCtx;
        p.f = mor_id(a->type.top);
        p.rctx = rctx_hole(a->type.right, a->type.bottom);
        p.hole = a;
        return p;
      }
      case TermKind::VComp:
        return pop_vcomp(tb, a);
      case TermKind::HComp:
        return pop_hcomp(tb, a);
    }
    throw Error("pop: unreachable");
  }

  PoppedForm pop_hid(TraceBuilder& tb, const TermPtr& a) {
    if (a->proto.empty()) {
      tb.struct_step({}, StructLaw::UnitCoincide, Orient::Fwd);
      tb.struct_step({}, StructLaw::VIdFlat, Orient::Fwd);
      PoppedForm p;
      p.shape = PopShape::Flat;
      p.f = tb.current()->base;
      return p;
    }
    tb.struct_step({}, StructLaw::HIdMerge, Orient::Bwd, 1);
    tb.struct_step({0}, StructLaw::VUnitL, Orient::Bwd);
    tb.struct_step({0, 0}, StructLaw::VIdFlat, Orient::Fwd);
    PoppedForm p;
    p.shape = PopShape::IdStage;
    p.f = mor_id({});
    p.atom = a->proto[0];
    p.residual = tb.current()->snd;
    return p;
  }

  PoppedForm pop_vcomp(TraceBuilder& tb, const TermPtr& a) {
    PopResult r0 = run(a->fst, a->specials + 1, true);
    tb.splice(r0.trace, {0});
    PoppedForm p0 = r0.form;

    if (p0.shape != PopShape::Flat) {
      switch (p0.shape) {
        case PopShape::IdStage:
        case PopShape::RecvLeft:
        case PopShape::RecvRight:
        case PopShape::SendLeft:
        case PopShape::SendRight: {
          // ((head) . b) . a1  ~  (head) . (b . a1)
          tb.struct_step({}, StructLaw::VAssoc, Orient::Bwd);
          PoppedForm p = p0;
          p.residual = tb.current()->snd;
          return p;
        }
        case PopShape::ProjStage: {
          // ((proj . id@W) | b) . a1  ~  (proj . id@(W.U')) | (b . a1)
          const ProtocolWord uu = a->snd->type.left;
          tb.struct_step({1}, StructLaw::HUnitL, Orient::Bwd);
          tb.struct_step({}, StructLaw::Interchange, Orient::Fwd);
          tb.struct_step({0}, StructLaw::VAssoc, Orient::Bwd);
          tb.struct_step({0, 1}, StructLaw::HIdMerge, Orient::Fwd);
          PoppedForm p = p0;
          p.w = proto_concat(p0.w, uu);
          p.residual = tb.current()->snd;
          return p;
        }
        case PopShape::InjStage: {
          const ProtocolWord vv = a->snd->type.right;
          tb.struct_step({1}, StructLaw::HUnitR, Orient::Bwd);
          tb.struct_step({}, StructLaw::Interchange, Orient::Fwd);
          tb.struct_step({1}, StructLaw::VAssoc, Orient::Bwd);
          tb.struct_step({1, 1}, StructLaw::HIdMerge, Orient::Fwd);
          PoppedForm p = p0;
          p.w = proto_concat(p0.w, vv);
          p.residual = tb.current()->fst;
          return p;
        }
        case PopShape::ProdCtx: {
          // ([f] . L[x]) . a1  ~  [f] . (L . a1)[x]
          tb.struct_step({}, StructLaw::VAssoc, Orient::Bwd);
          PoppedForm p = p0;
          p.lctx = p0.lctx.with_seq(a->snd);
          return p;
        }
        case PopShape::SumCtx: {
          tb.struct_step({}, StructLaw::VAssoc, Orient::Bwd);
          PoppedForm p = p0;
          p.rctx = p0.rctx.with_seq(a->snd);
          return p;
        }
        default:
          throw Error("pop: unreachable vcomp head shape");
      }
    }

    // Head popped to a plain base cell; pop the tail.
    PopResult r1 = run(a->snd, a->specials + 1, true);
    tb.splice(r1.trace, {1});
    PoppedForm p1 = r1.form;
    const BaseMor f = p0.f;

    switch (p1.shape) {
      case PopShape::Flat:
        tb.struct_step({}, StructLaw::FuseSeq, Orient::Fwd);
        return flat_of(tb);
      case PopShape::IdStage: {
        tb.struct_step({}, StructLaw::VAssoc, Orient::Fwd);
        tb.struct_step({0}, StructLaw::VAssoc, Orient::Fwd);
        tb.struct_step({0, 0}, StructLaw::FuseSeq, Orient::Fwd);
        PoppedForm p = p1;
        p.f = tb.current()->fst->fst->base;
        p.residual = tb.current()->snd;
        return p;
      }
      case PopShape::RecvLeft: {
        // [f] . ((A^> | 1@B) . b)  ~  (A^> | 1@X) . ((1@A | [f]) . b)
        tb.struct_step({}, StructLaw::VAssoc, Orient::Fwd);
        tb.struct_step({0, 0}, StructLaw::HUnitL, Orient::Bwd);
        tb.struct_step({0}, StructLaw::Interchange, Orient::Fwd);
        tb.struct_step({0, 0, 0}, StructLaw::UnitCoincide, Orient::Fwd);
        tb.struct_step({0, 0}, StructLaw::VUnitL, Orient::Fwd);
        tb.struct_step({0, 1}, StructLaw::VUnitR, Orient::Fwd);
        tb.struct_step({0, 0}, StructLaw::VUnitR, Orient::Bwd);
        tb.struct_step({0, 1}, StructLaw::VUnitL, Orient::Bwd);
        tb.struct_step({0}, StructLaw::Interchange, Orient::Bwd);
        tb.struct_step({}, StructLaw::VAssoc, Orient::Bwd);
        PoppedForm p = p1;
        p.whisker = f.dom;
        p.residual = tb.current()->snd;
        return p;
      }
      case PopShape::RecvRight: {
        tb.struct_step({}, StructLaw::VAssoc, Orient::Fwd);
        tb.struct_step({0, 0}, StructLaw::HUnitR, Orient::Bwd);
        tb.struct_step({0}, StructLaw::Interchange, Orient::Fwd);
        tb.struct_step({0, 0}, StructLaw::VUnitR, Orient::Fwd);
        tb.struct_step({0, 1, 0}, StructLaw::UnitCoincide, Orient::Fwd);
        tb.struct_step({0, 1}, StructLaw::VUnitL, Orient::Fwd);
        tb.struct_step({0, 0}, StructLaw::VUnitL, Orient::Bwd);
        tb.struct_step({0, 1}, StructLaw::VUnitR, Orient::Bwd);
        tb.struct_step({0}, StructLaw::Interchange, Orient::Bwd);
        tb.struct_step({}, StructLaw::VAssoc, Orient::Bwd);
        PoppedForm p = p1;
        p.whisker = f.dom;
        p.residual = tb.current()->snd;
        return p;
      }
      case PopShape::SendLeft:
      case PopShape::SendRight: {
        tb.struct_step({}, StructLaw::VAssoc, Orient::Fwd);
        tb.struct_step({0}, StructLaw::VAssoc, Orient::Fwd);
        tb.struct_step({0, 0}, StructLaw::FuseSeq, Orient::Fwd);
        PoppedForm p = p1;
        p.f = tb.current()->fst->fst->base;
        p.residual = tb.current()->snd;
        return p;
      }
      case PopShape::ProjStage: {
        tb.struct_step({0}, StructLaw::HUnitL, Orient::Bwd);
        tb.struct_step({}, StructLaw::Interchange, Orient::Fwd);
        tb.struct_step({0, 0}, StructLaw::UnitCoincide, Orient::Fwd);
        tb.struct_step({0}, StructLaw::VUnitL, Orient::Fwd);
        PoppedForm p = p1;
        p.residual = tb.current()->snd;
        return p;
      }
      case PopShape::InjStage: {
        tb.struct_step({0}, StructLaw::HUnitR, Orient::Bwd);
        tb.struct_step({}, StructLaw::Interchange, Orient::Fwd);
        tb.struct_step({1, 0}, StructLaw::UnitCoincide, Orient::Fwd);
        tb.struct_step({1}, StructLaw::VUnitL, Orient::Fwd);
        PoppedForm p = p1;
        p.residual = tb.current()->fst;
        return p;
      }
      case PopShape::ProdCtx:
      case PopShape::SumCtx: {
        tb.struct_step({}, StructLaw::VAssoc, Orient::Fwd);
        tb.struct_step({0}, StructLaw::FuseSeq, Orient::Fwd);
        PoppedForm p = p1;
        p.f = tb.current()->fst->base;
        return p;
      }
      default:
        throw Error("pop: unreachable vcomp tail shape");
    }
  }

  PoppedForm flat_of(TraceBuilder& tb) {
    PoppedForm p;
    p.shape = PopShape::Flat;
    p.f = tb.current()->base;
    return p;
  }

  PoppedForm pop_hcomp(TraceBuilder& tb, const TermPtr& a) {
    PopResult r0 = run(a->fst, a->specials + 1, true);
    tb.splice(r0.trace, {0});
    PopResult r1 = run(a->snd, a->specials + 1, true);
    tb.splice(r1.trace, {1});
    const PoppedForm &p0 = r0.form, &p1 = r1.form;
#ifdef CORNERING_POP_DEBUG
    fprintf(stderr, "hcomp case: %s | %s\n", pop_shape_name(p0.shape),
            pop_shape_name(p1.shape));
#endif

    // Absorption: a special cell facing away from the seam swallows the
    // other side wholesale.
    if (p0.shape == PopShape::RecvLeft) {
      const ObjectWord c = a->snd->type.top;
      tb.struct_step({1}, StructLaw::VUnitL, Orient::Bwd);
      tb.struct_step({}, StructLaw::Interchange, Orient::Bwd);
      tb.struct_step({0}, StructLaw::HAssoc, Orient::Fwd);
      fuse_ones(tb, {0, 1});
      PoppedForm p = p0;
      p.whisker = word_concat(p0.whisker, c);
      p.residual = tb.current()->snd;
      return p;
    }
    if (p0.shape == PopShape::SendLeft) {
      const ObjectWord c = a->snd->type.top;
      tb.struct_step({1}, StructLaw::VUnitL, Orient::Bwd);
      tb.struct_step({1, 1}, StructLaw::VUnitL, Orient::Bwd);
      tb.struct_step({1}, StructLaw::VAssoc, Orient::Fwd);
      tb.struct_step({}, StructLaw::Interchange, Orient::Bwd);
      tb.struct_step({0}, StructLaw::Interchange, Orient::Bwd);
      fuse_base_one(tb, {0, 0});
      tb.struct_step({0, 1}, StructLaw::HAssoc, Orient::Fwd);
      fuse_ones(tb, {0, 1, 1});
      PoppedForm p = p0;
      p.f = tb.current()->fst->fst->base;
      p.whisker = word_concat(p0.whisker, c);
      p.residual = tb.current()->snd;
      return p;
    }
    if (p1.shape == PopShape::RecvRight) {
      const ObjectWord c = a->fst->type.top;
      tb.struct_step({0}, StructLaw::VUnitL, Orient::Bwd);
      tb.struct_step({}, StructLaw::Interchange, Orient::Bwd);
      tb.struct_step({0}, StructLaw::HAssoc, Orient::Bwd);
      fuse_ones(tb, {0, 0});
      PoppedForm p = p1;
      p.whisker = word_concat(c, p1.whisker);
      p.residual = tb.current()->snd;
      return p;
    }
    if (p1.shape == PopShape::SendRight) {
      const ObjectWord c = a->fst->type.top;
      tb.struct_step({0}, StructLaw::VUnitL, Orient::Bwd);
      tb.struct_step({0, 1}, StructLaw::VUnitL, Orient::Bwd);
      tb.struct_step({0}, StructLaw::VAssoc, Orient::Fwd);
      tb.struct_step({}, StructLaw::Interchange, Orient::Bwd);
      tb.struct_step({0}, StructLaw::Interchange, Orient::Bwd);
      fuse_one_base(tb, {0, 0});
      tb.struct_step({0, 1}, StructLaw::HAssoc, Orient::Bwd);
      fuse_ones(tb, {0, 1, 0});
      PoppedForm p = p1;
      p.f = tb.current()->fst->fst->base;
      p.whisker = word_concat(c, p1.whisker);
      p.residual = tb.current()->snd;
      return p;
    }
    if (p0.shape == PopShape::ProjStage) {
      tb.struct_step({}, StructLaw::HAssoc, Orient::Fwd);
      PoppedForm p = p0;
      p.residual = tb.current()->snd;
      return p;
    }
    if (p1.shape == PopShape::InjStage) {
      tb.struct_step({}, StructLaw::HAssoc, Orient::Bwd);
      PoppedForm p = p1;
      p.residual = tb.current()->fst;
      return p;
    }
    if (p0.shape == PopShape::SumCtx) {
      tb.struct_step({1}, StructLaw::VUnitL, Orient::Bwd);
      tb.struct_step({}, StructLaw::Interchange, Orient::Bwd);
      fuse_base_one(tb, {0});
      PoppedForm p = p0;
      p.f = tb.current()->fst->base;
      p.rctx = p0.rctx.with_par(subterm_at(tb.current(), {1, 1}));
      return p;
    }
    if (p1.shape == PopShape::ProdCtx) {
      tb.struct_step({0}, StructLaw::VUnitL, Orient::Bwd);
      tb.struct_step({}, StructLaw::Interchange, Orient::Bwd);
      fuse_one_base(tb, {0});
      PoppedForm p = p1;
      p.f = tb.current()->fst->base;
      p.lctx = p1.lctx.with_par(subterm_at(tb.current(), {1, 0}));
      return p;
    }

    // Plain pairing.
    if (p0.shape == PopShape::Flat && p1.shape == PopShape::Flat) {
      tb.struct_step({}, StructLaw::FusePar, Orient::Fwd);
      return flat_of(tb);
    }

    // Stage pairing through an atomic horizontal identity.
    if (p0.shape == PopShape::IdStage && p1.shape == PopShape::IdStage) {
      tb.struct_step({}, StructLaw::Interchange, Orient::Bwd);
      tb.struct_step({0}, StructLaw::Interchange, Orient::Bwd);
      tb.struct_step({0, 0}, StructLaw::FusePar, Orient::Fwd);
      tb.struct_step({0, 1}, StructLaw::HUnitL, Orient::Fwd);
      PoppedForm p = p0;
      p.f = tb.current()->fst->fst->base;
      p.residual = tb.current()->snd;
      return p;
    }
    if (p0.shape == PopShape::IdStage && p1.shape == PopShape::RecvLeft &&
        p0.atom.kind == ProtoKind::Send) {
      return hcomp_id_recv_left(tb, p0, p1);
    }
    if (p0.shape == PopShape::RecvRight && p1.shape == PopShape::IdStage &&
        p1.atom.kind == ProtoKind::Recv) {
      return hcomp_recv_right_id(tb, p0, p1);
    }
    if (p0.shape == PopShape::IdStage && p1.shape == PopShape::SendLeft &&
        p0.atom.kind == ProtoKind::Recv) {
      // stage pairing, exposing the send-left head
      tb.struct_step({}, StructLaw::Interchange, Orient::Bwd);
      tb.struct_step({0}, StructLaw::Interchange, Orient::Bwd);
      tb.struct_step({0, 0}, StructLaw::FusePar, Orient::Fwd);
      tb.struct_step({0, 1}, StructLaw::HUnitL, Orient::Fwd);
      PoppedForm p = p1;
      p.f = tb.current()->fst->fst->base;
      p.residual = tb.current()->snd;
      return p;
    }
    if (p0.shape == PopShape::SendRight && p1.shape == PopShape::IdStage &&
        p1.atom.kind == ProtoKind::Send) {
      tb.struct_step({}, StructLaw::Interchange, Orient::Bwd);
      tb.struct_step({0}, StructLaw::Interchange, Orient::Bwd);
      tb.struct_step({0, 0}, StructLaw::FusePar, Orient::Fwd);
      tb.struct_step({0, 1}, StructLaw::HUnitR, Orient::Fwd);
      PoppedForm p = p0;
      p.f = tb.current()->fst->fst->base;
      p.residual = tb.current()->snd;
      return p;
    }
    if (p0.shape == PopShape::IdStage && p1.shape == PopShape::SumCtx &&
        p0.atom.kind == ProtoKind::Plus) {
      tb.struct_step({0}, StructLaw::VAssoc, Orient::Bwd);
      tb.struct_step({}, StructLaw::Interchange, Orient::Bwd);
      tb.struct_step({0}, StructLaw::FusePar, Orient::Fwd);
      PoppedForm p = p1;
      p.f = tb.current()->fst->base;
      p.rctx = p1.rctx.with_diamond(subterm_at(tb.current(), {1, 0, 1}));
      return p;
    }
    if (p0.shape == PopShape::ProdCtx && p1.shape == PopShape::IdStage &&
        p1.atom.kind == ProtoKind::Times) {
      tb.struct_step({1}, StructLaw::VAssoc, Orient::Bwd);
      tb.struct_step({}, StructLaw::Interchange, Orient::Bwd);
      tb.struct_step({0}, StructLaw::FusePar, Orient::Fwd);
      PoppedForm p = p0;
      p.f = tb.current()->fst->base;
      p.lctx = p0.lctx.with_diamond(subterm_at(tb.current(), {1, 1, 1}));
      return p;
    }
    if (p0.shape == PopShape::IdStage && p1.shape == PopShape::ProjStage &&
        p0.atom.kind == ProtoKind::Times) {
      return hcomp_id_proj(tb, p0, p1);
    }
    if (p0.shape == PopShape::InjStage && p1.shape == PopShape::IdStage &&
        p1.atom.kind == ProtoKind::Plus) {
      return hcomp_inj_id(tb, p0, p1);
    }

    // Facing pairs expose an interaction redex; reduce it and re-pop.
    if (p0.shape == PopShape::SendRight && p1.shape == PopShape::RecvLeft) {
      tb.struct_step({}, StructLaw::Interchange, Orient::Bwd);
      tb.struct_step({0, 1}, StructLaw::VUnitL, Orient::Bwd);
      tb.struct_step({0}, StructLaw::Interchange, Orient::Bwd);
      tb.struct_step({0, 1}, StructLaw::HAssoc, Orient::Fwd);
      tb.struct_step({0, 1, 1}, StructLaw::HAssoc, Orient::Bwd);
      tb.beta_step({0, 1, 1, 0}, BetaRule::CornersO);
      fuse_ones(tb, {0, 1, 1});
      fuse_ones(tb, {0, 1});
      tb.struct_step({0}, StructLaw::VUnitR, Orient::Fwd);
      return repop(tb, a);
    }
    if (p0.shape == PopShape::RecvRight && p1.shape == PopShape::SendLeft) {
      tb.struct_step({}, StructLaw::Interchange, Orient::Bwd);
      tb.struct_step({0, 0}, StructLaw::VUnitL, Orient::Bwd);
      tb.struct_step({0}, StructLaw::Interchange, Orient::Bwd);
      tb.struct_step({0, 1}, StructLaw::HAssoc, Orient::Fwd);
      tb.struct_step({0, 1, 1}, StructLaw::HAssoc, Orient::Bwd);
      tb.beta_step({0, 1, 1, 0}, BetaRule::CornersB);
      fuse_ones(tb, {0, 1, 1});
      fuse_ones(tb, {0, 1});
      tb.struct_step({0}, StructLaw::VUnitR, Orient::Fwd);
      return repop(tb, a);
    }
    if (p0.shape == PopShape::ProdCtx && p1.shape == PopShape::ProjStage) {
      tb.struct_step({}, StructLaw::HAssoc, Orient::Bwd);
      tb.struct_step({0, 1}, StructLaw::VUnitL, Orient::Bwd);
      tb.struct_step({0}, StructLaw::Interchange, Orient::Bwd);
      fuse_base_one(tb, {0, 0});
      // shift the projection stage into the context
      TermPtr proj = t_proj(p1.index, p1.u0, p1.u1);
      auto [shifted, tr] = lshift(p0.lctx, p0.hole, proj);
      tb.splice(tr, {0, 1});
      Path beta_pos = at({0, 1}, {});
      Path hp = lctx_hole_path(p0.lctx);
      beta_pos.insert(beta_pos.end(), hp.begin(), hp.end());
      tb.beta_step(beta_pos, BetaRule::Proj);
      return repop(tb, a);
    }
    if (p0.shape == PopShape::InjStage && p1.shape == PopShape::SumCtx) {
      tb.struct_step({}, StructLaw::HAssoc, Orient::Fwd);
      tb.struct_step({1, 0}, StructLaw::VUnitL, Orient::Bwd);
      tb.struct_step({1}, StructLaw::Interchange, Orient::Bwd);
      fuse_one_base(tb, {1, 0});
      TermPtr inj = t_inj(p0.index, p0.u0, p0.u1);
      auto [shifted, tr] = rshift(p1.rctx, p1.hole, inj);
      tb.splice(tr, {1, 1});
      Path beta_pos = at({1, 1}, {});
      Path hp = rctx_hole_path(p1.rctx);
      beta_pos.insert(beta_pos.end(), hp.begin(), hp.end());
      tb.beta_step(beta_pos, BetaRule::Inj);
      return repop(tb, a);
    }

    throw Error(std::string("pop: unhandled pairing ") + pop_shape_name(p0.shape) +
                " | " + pop_shape_name(p1.shape));
  }

  // Re-pop after an interaction step removed special cells.
  PoppedForm repop(TraceBuilder& tb, const TermPtr& a) {
    PopResult r = run(tb.current(), a->specials, false);
    tb.splice(r.trace, {});
    return r.form;
  }

  PoppedForm hcomp_id_recv_left(TraceBuilder& tb, const PoppedForm& p0,
                                const PoppedForm& p1) {
    tb.struct_step({}, StructLaw::Interchange, Orient::Bwd);
    tb.struct_step({0, 1}, StructLaw::VUnitL, Orient::Bwd);
    tb.struct_step({0}, StructLaw::Interchange, Orient::Bwd);
    tb.struct_step({0, 1}, StructLaw::HUnitL, Orient::Fwd);
    tb.struct_step({0}, StructLaw::Interchange, Orient::Fwd);
    tb.struct_step({0, 1}, StructLaw::VUnitL, Orient::Fwd);
    // [0,0] = [f] . A^>  ->  (A^> | 1@X) . (1@A | [f])
    tb.struct_step({0, 0, 0}, StructLaw::HUnitL, Orient::Bwd);
    tb.struct_step({0, 0, 1}, StructLaw::HUnitR, Orient::Bwd);
    tb.struct_step({0, 0}, StructLaw::Interchange, Orient::Fwd);
    tb.struct_step({0, 0, 0, 0}, StructLaw::UnitCoincide, Orient::Fwd);
    tb.struct_step({0, 0, 0}, StructLaw::VUnitL, Orient::Fwd);
    tb.struct_step({0, 0, 1, 1}, StructLaw::UnitCoincide, Orient::Fwd);
    tb.struct_step({0, 0, 1}, StructLaw::VUnitR, Orient::Fwd);
    tb.struct_step({0, 0, 0}, StructLaw::VUnitR, Orient::Bwd);
    tb.struct_step({0, 0, 1}, StructLaw::VUnitL, Orient::Bwd);
    tb.struct_step({0, 0}, StructLaw::Interchange, Orient::Bwd);
    // distribute the 1@B whisker over both stages
    tb.struct_step({0, 1}, StructLaw::VUnitL, Orient::Bwd);
    tb.struct_step({0}, StructLaw::Interchange, Orient::Bwd);
    tb.struct_step({0, 0}, StructLaw::HAssoc, Orient::Fwd);
    fuse_ones(tb, {0, 0, 1});
    // [0,1] = (1@A | [f]) | 1@B  ->  [1@A * f * 1@B]
    tb.struct_step({0, 1, 0, 0}, StructLaw::VIdFlat, Orient::Fwd);
    tb.struct_step({0, 1, 0}, StructLaw::FusePar, Orient::Fwd);
    tb.struct_step({0, 1, 1}, StructLaw::VIdFlat, Orient::Fwd);
    tb.struct_step({0, 1}, StructLaw::FusePar, Orient::Fwd);
    tb.struct_step({}, StructLaw::VAssoc, Orient::Bwd);
    PoppedForm p = p1;
    p.whisker = word_concat(p0.f.dom, p1.whisker);
    p.residual = tb.current()->snd;
    return p;
  }

  PoppedForm hcomp_recv_right_id(TraceBuilder& tb, const PoppedForm& p0,
                                 const PoppedForm& p1) {
    tb.struct_step({}, StructLaw::Interchange, Orient::Bwd);
    tb.struct_step({0, 0}, StructLaw::VUnitL, Orient::Bwd);
    tb.struct_step({0}, StructLaw::Interchange, Orient::Bwd);
    tb.struct_step({0, 1}, StructLaw::HUnitR, Orient::Fwd);
    tb.struct_step({0}, StructLaw::Interchange, Orient::Fwd);
    tb.struct_step({0, 0}, StructLaw::VUnitL, Orient::Fwd);
    // [0,1] = [g] . A^<  ->  (1@Y | A^<) . ([g] | 1@A)
    tb.struct_step({0, 1, 0}, StructLaw::HUnitR, Orient::Bwd);
    tb.struct_step({0, 1, 1}, StructLaw::HUnitL, Orient::Bwd);
    tb.struct_step({0, 1}, StructLaw::Interchange, Orient::Fwd);
    tb.struct_step({0, 1, 0, 1}, StructLaw::UnitCoincide, Orient::Fwd);
    tb.struct_step({0, 1, 0}, StructLaw::VUnitR, Orient::Fwd);
    tb.struct_step({0, 1, 1, 0}, StructLaw::UnitCoincide, Orient::Fwd);
    tb.struct_step({0, 1, 1}, StructLaw::VUnitL, Orient::Fwd);
    tb.struct_step({0, 1, 0}, StructLaw::VUnitL, Orient::Bwd);
    tb.struct_step({0, 1, 1}, StructLaw::VUnitR, Orient::Bwd);
    tb.struct_step({0, 1}, StructLaw::Interchange, Orient::Bwd);
    tb.struct_step({0, 0}, StructLaw::VUnitL, Orient::Bwd);
    tb.struct_step({0}, StructLaw::Interchange, Orient::Bwd);
    tb.struct_step({0, 0}, StructLaw::HAssoc, Orient::Bwd);
    fuse_ones(tb, {0, 0, 0});
    tb.struct_step({0, 1, 1, 1}, StructLaw::VIdFlat, Orient::Fwd);
    tb.struct_step({0, 1, 1}, StructLaw::FusePar, Orient::Fwd);
    tb.struct_step({0, 1, 0}, StructLaw::VIdFlat, Orient::Fwd);
    tb.struct_step({0, 1}, StructLaw::FusePar, Orient::Fwd);
    tb.struct_step({}, StructLaw::VAssoc, Orient::Bwd);
    PoppedForm p = p0;
    p.whisker = word_concat(p0.whisker, p1.f.dom);
    p.residual = tb.current()->snd;
    return p;
  }

  PoppedForm hcomp_id_proj(TraceBuilder& tb, const PoppedForm& p0,
                           const PoppedForm& p1) {
    const TermPtr b = p0.residual;
    tb.struct_step({}, StructLaw::HAssoc, Orient::Bwd);
    tb.struct_step({0}, StructLaw::Interchange, Orient::Bwd);
    tb.struct_step({0, 1}, StructLaw::HUnitR, Orient::Fwd);
    tb.struct_step({0, 0, 1}, StructLaw::VUnitL, Orient::Bwd);
    tb.struct_step({0, 0}, StructLaw::Interchange, Orient::Bwd);
    fuse_base_one(tb, {0, 0, 0});
    tb.struct_step({0, 0, 1}, StructLaw::HUnitL, Orient::Fwd);
    // [0,0] = [f] . proj  ->  proj | ([f] . id@Ui)
    tb.struct_step({0, 0, 0}, StructLaw::FusePar, Orient::Bwd, 0);
    tb.struct_step({0, 0, 0, 0}, StructLaw::VIdFlat, Orient::Bwd);
    tb.struct_step({0, 0, 1}, StructLaw::HUnitR, Orient::Bwd);
    tb.struct_step({0, 0}, StructLaw::Interchange, Orient::Fwd);
    tb.struct_step({0, 0, 0}, StructLaw::VUnitL, Orient::Fwd);
    tb.struct_step({0, 1}, StructLaw::HUnitL, Orient::Bwd);
    tb.struct_step({0}, StructLaw::Interchange, Orient::Fwd);
    tb.struct_step({}, StructLaw::HAssoc, Orient::Fwd);
    PoppedForm p = p1;
    p.w = b->type.left;
    p.residual = tb.current()->snd;
    return p;
  }

  PoppedForm hcomp_inj_id(TraceBuilder& tb, const PoppedForm& p0,
                          const PoppedForm& p1) {
    const TermPtr c = p1.residual;
    tb.struct_step({}, StructLaw::HAssoc, Orient::Fwd);
    tb.struct_step({1}, StructLaw::Interchange, Orient::Bwd);
    tb.struct_step({1, 1}, StructLaw::HUnitL, Orient::Fwd);
    tb.struct_step({1, 0, 0}, StructLaw::VUnitL, Orient::Bwd);
    tb.struct_step({1, 0}, StructLaw::Interchange, Orient::Bwd);
    fuse_one_base(tb, {1, 0, 0});
    tb.struct_step({1, 0, 1}, StructLaw::HUnitR, Orient::Fwd);
    // [1,0] = [g] . inj  ->  ([g] . id@Ui) | inj
    tb.struct_step({1, 0, 0}, StructLaw::FusePar, Orient::Bwd,
                   p1.f.dom.size());
    tb.struct_step({1, 0, 0, 1}, StructLaw::VIdFlat, Orient::Bwd);
    tb.struct_step({1, 0, 1}, StructLaw::HUnitL, Orient::Bwd);
    tb.struct_step({1, 0}, StructLaw::Interchange, Orient::Fwd);
    tb.struct_step({1, 0, 1}, StructLaw::VUnitL, Orient::Fwd);
    tb.struct_step({1, 1}, StructLaw::HUnitR, Orient::Bwd);
    tb.struct_step({1}, StructLaw::Interchange, Orient::Fwd);
    tb.struct_step({}, StructLaw::HAssoc, Orient::Bwd);
    PoppedForm p = p0;
    p.w = c->type.right;
    p.residual = tb.current()->fst;
    return p;
  }
};

inline PopResult pop(const TermPtr& a) { return PopEngine{}.pop(a); }

}  // namespace cornering
