#pragma once

#include <optional>
#include <string>
#include <vector>

#include "cornering/term.hpp"

namespace cornering {

// The basic-equation schemas. Two-sided unit schemas are split into a
// left and a right law so that steps name one concrete redex each.
enum class StructLaw : uint8_t {
  FuseSeq,       // [f] . [g]  ~  [f ; g]
  FusePar,       // [f] | [g]  ~  [f * g]
  VIdFlat,       // 1@A        ~  [1@A]
  VUnitL,        // 1@A . a    ~  a
  VUnitR,        // a . 1@B    ~  a
  HUnitL,        // id@U | a   ~  a
  HUnitR,        // a | id@W   ~  a
  VAssoc,        // a . (b . c) ~ (a . b) . c
  HAssoc,        // (a | b) | c ~ a | (b | c)
  UnitCoincide,  // id@1       ~  1@I
  HIdMerge,      // id@U . id@W ~ id@(U.W)
  Interchange,   // (a | b) . (c | d) ~ (a . c) | (b . d)
};

enum class Orient : uint8_t { Fwd, Bwd };

inline const char* law_name(StructLaw l) {
  switch (l) {
    case StructLaw::FuseSeq: return "fuse_seq";
    case StructLaw::FusePar: return "fuse_par";
    case StructLaw::VIdFlat: return "vid_flat";
    case StructLaw::VUnitL: return "vunit_l";
    case StructLaw::VUnitR: return "vunit_r";
    case StructLaw::HUnitL: return "hunit_l";
    case StructLaw::HUnitR: return "hunit_r";
    case StructLaw::VAssoc: return "vassoc";
    case StructLaw::HAssoc: return "hassoc";
    case StructLaw::UnitCoincide: return "unit_coincide";
    case StructLaw::HIdMerge: return "hid_merge";
    case StructLaw::Interchange: return "interchange";
  }
  return "?";
}

inline std::optional<StructLaw> law_from_name(const std::string& s) {
  for (int i = 0; i <= static_cast<int>(StructLaw::Interchange); ++i) {
    auto l = static_cast<StructLaw>(i);
    if (s == law_name(l)) return l;
  }
  return std::nullopt;
}

// Applies one schema at the root. `arg` selects the split point for the
// backward orientations of fuse_seq, fuse_par and hid_merge; it is
// ignored elsewhere. Returns nothing when the pattern does not match.
inline std::optional<TermPtr> apply_struct_root(const TermPtr& t, StructLaw law,
                                                Orient o, std::size_t arg = 0) {
  const bool fwd = o == Orient::Fwd;
  switch (law) {
    case StructLaw::FuseSeq:
      if (fwd) {
        if (t->kind == TermKind::VComp && t->fst->kind == TermKind::Base &&
            t->snd->kind == TermKind::Base)
          return t_base(mor_comp(t->fst->base, t->snd->base));
      } else if (t->kind == TermKind::Base && arg <= t->base.slices.size()) {
        auto [f, g] = seq_split_at(t->base, arg);
        return t_vcomp(t_base(f), t_base(g));
      }
      return std::nullopt;
    case StructLaw::FusePar:
      if (fwd) {
        if (t->kind == TermKind::HComp && t->fst->kind == TermKind::Base &&
            t->snd->kind == TermKind::Base)
          return t_base(mor_tensor(t->fst->base, t->snd->base));
      } else if (t->kind == TermKind::Base) {
        if (auto s = tensor_split_at(t->base, arg))
          return t_hcomp(t_base(s->first), t_base(s->second));
      }
      return std::nullopt;
    case StructLaw::VIdFlat:
      if (fwd) {
        if (t->kind == TermKind::VId) return t_base(mor_id(t->obj));
      } else if (t->kind == TermKind::Base && t->base.is_identity()) {
        return t_vid(t->base.dom);
      }
      return std::nullopt;
    case StructLaw::VUnitL:
      if (fwd) {
        if (t->kind == TermKind::VComp && t->fst->kind == TermKind::VId)
          return t->snd;
        return std::nullopt;
      }
      return t_vcomp(t_vid(t->type.top), t);
    case StructLaw::VUnitR:
      if (fwd) {
        if (t->kind == TermKind::VComp && t->snd->kind == TermKind::VId)
          return t->fst;
        return std::nullopt;
      }
      return t_vcomp(t, t_vid(t->type.bottom));
    case StructLaw::HUnitL:
      if (fwd) {
        if (t->kind == TermKind::HComp && t->fst->kind == TermKind::HId)
          return t->snd;
        return std::nullopt;
      }
      return t_hcomp(t_hid(t->type.left), t);
    case StructLaw::HUnitR:
      if (fwd) {
        if (t->kind == TermKind::HComp && t->snd->kind == TermKind::HId)
          return t->fst;
        return std::nullopt;
      }
      return t_hcomp(t, t_hid(t->type.right));
    case StructLaw::VAssoc:
      if (fwd) {
        if (t->kind == TermKind::VComp && t->snd->kind == TermKind::VComp)
          return t_vcomp(t_vcomp(t->fst, t->snd->fst), t->snd->snd);
      } else {
        if (t->kind == TermKind::VComp && t->fst->kind == TermKind::VComp)
          return t_vcomp(t->fst->fst, t_vcomp(t->fst->snd, t->snd));
      }
      return std::nullopt;
    case StructLaw::HAssoc:
      if (fwd) {
        if (t->kind == TermKind::HComp && t->fst->kind == TermKind::HComp)
          return t_hcomp(t->fst->fst, t_hcomp(t->fst->snd, t->snd));
      } else {
        if (t->kind == TermKind::HComp && t->snd->kind == TermKind::HComp)
          return t_hcomp(t_hcomp(t->fst, t->snd->fst), t->snd->snd);
      }
      return std::nullopt;
    case StructLaw::UnitCoincide:
      if (fwd) {
        if (t->kind == TermKind::HId && t->proto.empty()) return t_vid({});
      } else {
        if (t->kind == TermKind::VId && t->obj.empty()) return t_hid({});
      }
      return std::nullopt;
    case StructLaw::HIdMerge:
      if (fwd) {
        if (t->kind == TermKind::VComp && t->fst->kind == TermKind::HId &&
            t->snd->kind == TermKind::HId)
          return t_hid(proto_concat(t->fst->proto, t->snd->proto));
      } else if (t->kind == TermKind::HId && arg <= t->proto.size()) {
        return t_vcomp(t_hid(proto_slice(t->proto, 0, arg)),
                       t_hid(proto_slice(t->proto, arg, t->proto.size())));
      }
      return std::nullopt;
    case StructLaw::Interchange:
      if (fwd) {
        if (t->kind == TermKind::VComp && t->fst->kind == TermKind::HComp &&
            t->snd->kind == TermKind::HComp) {
          const TermPtr &a = t->fst->fst, &b = t->fst->snd, &c = t->snd->fst,
                        &d = t->snd->snd;
          if (a->type.bottom == c->type.top && b->type.bottom == d->type.top)
            return t_hcomp(t_vcomp(a, c), t_vcomp(b, d));
        }
      } else {
        if (t->kind == TermKind::HComp && t->fst->kind == TermKind::VComp &&
            t->snd->kind == TermKind::VComp) {
          const TermPtr &a = t->fst->fst, &c = t->fst->snd, &b = t->snd->fst,
                        &d = t->snd->snd;
          if (a->type.right == b->type.left && c->type.right == d->type.left)
            return t_vcomp(t_hcomp(a, b), t_hcomp(c, d));
        }
      }
      return std::nullopt;
  }
  return std::nullopt;
}

struct StructMove {
  StructLaw law;
  Orient orient;
  std::size_t arg = 0;
};

// All schema applications available at the root of t.
inline std::vector<StructMove> struct_moves_at(const TermPtr& t) {
  std::vector<StructMove> out;
  auto add = [&](StructLaw l, Orient o, std::size_t arg = 0) {
    out.push_back({l, o, arg});
  };
  switch (t->kind) {
    case TermKind::Base:
      for (std::size_t k = 0; k <= t->base.slices.size(); ++k)
        add(StructLaw::FuseSeq, Orient::Bwd, k);
      for (std::size_t k = 0; k <= t->base.dom.size(); ++k)
        if (tensor_split_at(t->base, k)) add(StructLaw::FusePar, Orient::Bwd, k);
      if (t->base.is_identity()) add(StructLaw::VIdFlat, Orient::Bwd);
      break;
    case TermKind::VId:
      add(StructLaw::VIdFlat, Orient::Fwd);
      if (t->obj.empty()) add(StructLaw::UnitCoincide, Orient::Bwd);
      break;
    case TermKind::HId:
      if (t->proto.empty()) add(StructLaw::UnitCoincide, Orient::Fwd);
      for (std::size_t k = 0; k <= t->proto.size(); ++k)
        add(StructLaw::HIdMerge, Orient::Bwd, k);
      break;
    case TermKind::VComp:
      if (t->snd->kind == TermKind::VComp) add(StructLaw::VAssoc, Orient::Fwd);
      if (t->fst->kind == TermKind::VComp) add(StructLaw::VAssoc, Orient::Bwd);
      if (t->fst->kind == TermKind::VId) add(StructLaw::VUnitL, Orient::Fwd);
      if (t->snd->kind == TermKind::VId) add(StructLaw::VUnitR, Orient::Fwd);
      if (t->fst->kind == TermKind::Base && t->snd->kind == TermKind::Base)
        add(StructLaw::FuseSeq, Orient::Fwd);
      if (t->fst->kind == TermKind::HId && t->snd->kind == TermKind::HId)
        add(StructLaw::HIdMerge, Orient::Fwd);
      if (t->fst->kind == TermKind::HComp && t->snd->kind == TermKind::HComp &&
          t->fst->fst->type.bottom == t->snd->fst->type.top &&
          t->fst->snd->type.bottom == t->snd->snd->type.top)
        add(StructLaw::Interchange, Orient::Fwd);
      break;
    case TermKind::HComp:
      if (t->fst->kind == TermKind::HComp) add(StructLaw::HAssoc, Orient::Fwd);
      if (t->snd->kind == TermKind::HComp) add(StructLaw::HAssoc, Orient::Bwd);
      if (t->fst->kind == TermKind::HId) add(StructLaw::HUnitL, Orient::Fwd);
      if (t->snd->kind == TermKind::HId) add(StructLaw::HUnitR, Orient::Fwd);
      if (t->fst->kind == TermKind::Base && t->snd->kind == TermKind::Base)
        add(StructLaw::FusePar, Orient::Fwd);
      if (t->fst->kind == TermKind::VComp && t->snd->kind == TermKind::VComp &&
          t->fst->fst->type.right == t->snd->fst->type.left &&
          t->fst->snd->type.right == t->snd->snd->type.left)
        add(StructLaw::Interchange, Orient::Bwd);
      break;
    default:
      break;
  }
  // Unit expansions apply to every term.
  add(StructLaw::VUnitL, Orient::Bwd);
  add(StructLaw::VUnitR, Orient::Bwd);
  add(StructLaw::HUnitL, Orient::Bwd);
  add(StructLaw::HUnitR, Orient::Bwd);
  return out;
}

// ---------------------------------------------------------------------
// The interaction rewrites.

enum class BetaRule : uint8_t {
  CornersO,  // A_> | A^>  ->  1@A
  CornersB,  // A^< | A_<  ->  1@A
  Proj,      // (a0 (x) a1) | proj{i}  ->  a{i}
  Inj,       // inj{i} | (a0 (+) a1)   ->  a{i}
};

inline const char* beta_name(BetaRule r) {
  switch (r) {
    case BetaRule::CornersO: return "corners_o";
    case BetaRule::CornersB: return "corners_b";
    case BetaRule::Proj: return "proj";
    case BetaRule::Inj: return "inj";
  }
  return "?";
}

inline std::optional<BetaRule> beta_from_name(const std::string& s) {
  for (int i = 0; i <= static_cast<int>(BetaRule::Inj); ++i) {
    auto r = static_cast<BetaRule>(i);
    if (s == beta_name(r)) return r;
  }
  return std::nullopt;
}

inline std::optional<TermPtr> apply_beta_root(const TermPtr& t, BetaRule r) {
  if (t->kind != TermKind::HComp) return std::nullopt;
  const TermPtr &a = t->fst, &b = t->snd;
  switch (r) {
    case BetaRule::CornersO:
      if (a->kind == TermKind::CornerLL && b->kind == TermKind::CornerUR &&
          a->obj == b->obj)
        return t_vid(a->obj);
      return std::nullopt;
    case BetaRule::CornersB:
      if (a->kind == TermKind::CornerUL && b->kind == TermKind::CornerLR &&
          a->obj == b->obj)
        return t_vid(a->obj);
      return std::nullopt;
    case BetaRule::Proj:
      if (a->kind == TermKind::Prod && b->kind == TermKind::Proj)
        return b->index == 0 ? a->fst : a->snd;
      return std::nullopt;
    case BetaRule::Inj:
      if (a->kind == TermKind::Inj && b->kind == TermKind::Sum)
        return a->index == 0 ? b->fst : b->snd;
      return std::nullopt;
  }
  return std::nullopt;
}

inline std::optional<BetaRule> beta_match_root(const TermPtr& t) {
  for (int i = 0; i <= static_cast<int>(BetaRule::Inj); ++i) {
    auto r = static_cast<BetaRule>(i);
    if (apply_beta_root(t, r)) return r;
  }
  return std::nullopt;
}

// All syntactic occurrences of the four interaction redexes; the search
// modulo structural equations is the normalizer's job, not this one's.
inline void enumerate_beta_redexes(const TermPtr& t, Path& prefix,
                                   std::vector<std::pair<Path, BetaRule>>& out) {
  if (auto r = beta_match_root(t)) out.push_back({prefix, *r});
  if (t->fst) {
    prefix.push_back(0);
    enumerate_beta_redexes(t->fst, prefix, out);
    prefix.back() = 1;
    enumerate_beta_redexes(t->snd, prefix, out);
    prefix.pop_back();
  }
}

inline std::vector<std::pair<Path, BetaRule>> enumerate_beta_redexes(const TermPtr& t) {
  std::vector<std::pair<Path, BetaRule>> out;
  Path p;
  enumerate_beta_redexes(t, p, out);
  return out;
}

// ---------------------------------------------------------------------
// Extensionality instances. These are never oriented as rewrites; they
// exist as equation instances for the test harness.

struct EquationInstance {
  std::string law;
  TermPtr lhs;
  TermPtr rhs;
};

inline EquationInstance eta_corner_send(const ObjectWord& a) {
  return {"eta_corners_o", t_vcomp(t_corner_ur(a), t_corner_ll(a)),
          t_hid(proto_word(proto_send(a)))};
}

inline EquationInstance eta_corner_recv(const ObjectWord& a) {
  return {"eta_corners_b", t_vcomp(t_corner_ul(a), t_corner_lr(a)),
          t_hid(proto_word(proto_recv(a)))};
}

// The pairing and copairing schemas instantiated at h, when its boundary
// has the required shape.
inline std::vector<EquationInstance> eta_instances(const TermPtr& h) {
  std::vector<EquationInstance> out;
  if (h->type.right.size() == 1 && h->type.right[0].kind == ProtoKind::Times) {
    const auto& u = h->type.right[0].fst;
    const auto& w = h->type.right[0].snd;
    out.push_back({"eta_prod",
                   t_prod(t_hcomp(h, t_proj(0, u, w)), t_hcomp(h, t_proj(1, u, w))),
                   h});
  }
  if (h->type.left.size() == 1 && h->type.left[0].kind == ProtoKind::Plus) {
    const auto& u = h->type.left[0].fst;
    const auto& w = h->type.left[0].snd;
    out.push_back({"eta_sum",
                   t_sum(t_hcomp(t_inj(0, u, w), h), t_hcomp(t_inj(1, u, w), h)),
                   h});
  }
  return out;
}

}  // namespace cornering
