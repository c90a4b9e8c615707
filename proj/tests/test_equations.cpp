#include <catch2/catch_amalgamated.hpp>

#include "cornering/canon.hpp"
#include "cornering/gen.hpp"
#include "cornering/trace.hpp"
#include "support.hpp"

using namespace cornering;
using namespace cornering::testing;

TEST_CASE("interchange recombines boundaries") {
  TermPtr a = t_corner_ll({"A"});
  TermPtr b = t_corner_ur({"A"});
  TermPtr top = t_hcomp(a, b);
  TermPtr bottom = t_hcomp(t_vid({}), t_vid({"A"}));
  TermPtr lhs = t_vcomp(top, bottom);
  auto res = apply_struct_root(lhs, StructLaw::Interchange, Orient::Fwd);
  REQUIRE(res.has_value());
  CHECK((*res)->kind == TermKind::HComp);
  CHECK((*res)->type == lhs->type);
  auto back = apply_struct_root(*res, StructLaw::Interchange, Orient::Bwd);
  REQUIRE(back.has_value());
  CHECK(term_eq(*back, lhs));
}

TEST_CASE("every enumerated step preserves the cell type and measure") {
  Signature s = fourgen_sig();
  for (std::uint64_t seed = 0; seed < 60; ++seed) {
    TermPtr t = gen_term(s, seed, 14, GenTarget::Arbitrary);
    for (const auto& step : enumerate_struct_steps(t)) {
      CHECK(step.result->type == t->type);
      CHECK(count_special(step.result) == count_special(t));
    }
  }
}

TEST_CASE("fusion laws on base leaves") {
  Signature s = bakery_sig();
  TermPtr f = t_base(gen_of(s, "bread"));
  TermPtr g = t_base(gen_of(s, "eat"));
  TermPtr both = t_vcomp(f, g);
  auto fused = apply_struct_root(both, StructLaw::FuseSeq, Orient::Fwd);
  REQUIRE(fused.has_value());
  CHECK((*fused)->kind == TermKind::Base);
  CHECK(base_eq((*fused)->base, mor_comp(f->base, g->base)));
  for (std::size_t k = 0; k <= (*fused)->base.slices.size(); ++k) {
    auto split = apply_struct_root(*fused, StructLaw::FuseSeq, Orient::Bwd, k);
    REQUIRE(split.has_value());
    CHECK((*split)->type == (*fused)->type);
  }
}

TEST_CASE("backward steps on a bare generator") {
  Signature s = bakery_sig();
  TermPtr f = t_base(gen_of(s, "mix"));
  auto moves = struct_moves_at(f);
  bool found = false;
  for (const auto& m : moves) {
    auto r = apply_struct_root(f, m.law, m.orient, m.arg);
    REQUIRE(r.has_value());
    if ((*r)->kind == TermKind::VComp && (*r)->fst->kind == TermKind::VId &&
        (*r)->fst->obj == f->base.dom)
      found = true;
  }
  CHECK(found);
}

TEST_CASE("structural normal form collapses units and fuses") {
  Signature s = bakery_sig();
  TermPtr f = t_base(gen_of(s, "bread"));
  TermPtr noisy = t_vcomp(t_vid({}), t_vcomp(f, t_vcomp(t_base(gen_of(s, "eat")),
                                                        t_vid({}))));
  TermPtr c = struct_canon(noisy);
  CHECK(c->kind == TermKind::Base);
  CHECK(base_eq(c->base, mor_comp(gen_of(s, "bread"), gen_of(s, "eat"))));

  TermPtr idish = t_hcomp(t_hid(proto_word(proto_send({"A"}))), t_corner_ur({"A"}));
  CHECK(term_eq(struct_canon(idish), t_corner_ur({"A"})));
  CHECK(struct_canon(t_hid({}))->kind == TermKind::Base);
}

TEST_CASE("bounded structural equality") {
  Signature s = bakery_sig();
  TermPtr a = t_corner_ll({"A"});
  TermPtr b = t_corner_ur({"A"});
  TermPtr c = t_vid({"A"});

  TermPtr u = t_vid({});
  TermPtr lhs = t_vcomp(t_hcomp(a, b), t_hcomp(u, c));
  TermPtr rhs = t_hcomp(t_vcomp(a, u), t_vcomp(b, c));
  CHECK(eq_struct_bounded(lhs, rhs, 1) == Bounded::Equal);

  CHECK(eq_struct_bounded(t_hid({}), t_vid({}), 1) == Bounded::Equal);

  TermPtr f = t_base(gen_of(s, "water"));
  TermPtr g = t_base(gen_of(s, "flour"));
  CHECK(eq_struct_bounded(f, g, 3) == Bounded::Unknown);

  CHECK_THROWS_AS(eq_struct_bounded(f, t_vid({}), 2), TypeMismatch);
}

TEST_CASE("bounded equality is symmetric and monotone in depth") {
  Signature s = fourgen_sig();
  std::mt19937_64 rng(3);
  int equal_seen = 0;
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    TermPtr t = gen_term(s, seed, 10, GenTarget::Arbitrary);
    auto steps = enumerate_struct_steps(t);
    if (steps.empty()) continue;
    TermPtr u = steps[rng() % steps.size()].result;
    for (std::size_t depth : {1, 2, 4}) {
      Bounded ab = eq_struct_bounded(t, u, depth);
      CHECK(ab == eq_struct_bounded(u, t, depth));
      if (ab == Bounded::Equal) {
        ++equal_seen;
        CHECK(eq_struct_bounded(t, u, depth + 2) == Bounded::Equal);
        break;
      }
    }
  }
  CHECK(equal_seen > 10);
}

TEST_CASE("beta redex enumeration") {
  TermPtr yank = t_hcomp(t_corner_ll({"A"}), t_corner_ur({"A"}));
  auto redexes = enumerate_beta_redexes(yank);
  REQUIRE(redexes.size() == 1);
  CHECK(redexes[0].second == BetaRule::CornersO);
  TermPtr res = *apply_beta_root(yank, BetaRule::CornersO);
  CHECK(term_eq(res, t_vid({"A"})));

  TermPtr p0 = t_hcomp(t_corner_ll({"A"}), t_corner_ur({"A"}));
  TermPtr p1 = t_vid({"A"});
  TermPtr prod = t_prod(t_vcomp(p0, t_corner_ll({"A"})),
                        t_vcomp(p1, t_corner_ll({"A"})));
  TermPtr pr = t_proj(1, prod->type.right[0].fst, prod->type.right[0].snd);
  TermPtr red = t_hcomp(prod, pr);
  auto rs = enumerate_beta_redexes(red);
  bool proj_at_root = false;
  for (const auto& [pos, rule] : rs)
    if (pos.empty() && rule == BetaRule::Proj) proj_at_root = true;
  CHECK(proj_at_root);
  TermPtr out = *apply_beta_root(red, BetaRule::Proj);
  CHECK(term_eq(out, prod->snd));

  CHECK(enumerate_beta_redexes(t_base(mor_id({"A"}))).empty());
}

TEST_CASE("eta instances") {
  auto inst = eta_corner_send({"A"});
  CHECK(inst.lhs->type == inst.rhs->type);
  CHECK(term_eq(inst.rhs, t_hid(proto_word(proto_send({"A"})))));

  auto inst2 = eta_corner_recv({"Gum", "$1"});
  CHECK(inst2.lhs->type == inst2.rhs->type);

  ProtocolWord u = proto_word(proto_send({"A"}));
  ProtocolWord w = proto_word(proto_recv({"B"}));
  TermPtr h = t_hid(proto_word(proto_times(u, w)));
  auto insts = eta_instances(h);
  REQUIRE(insts.size() == 1);
  CHECK(insts[0].law == "eta_prod");
  CHECK(insts[0].lhs->type == h->type);

  TermPtr hsum = t_hid(proto_word(proto_plus(u, w)));
  auto insts2 = eta_instances(hsum);
  REQUIRE(insts2.size() == 1);
  CHECK(insts2[0].law == "eta_sum");
  CHECK(insts2[0].lhs->type == hsum->type);
}

TEST_CASE("trace replay detects corruption") {
  Signature s = bakery_sig();
  TermPtr f = t_base(gen_of(s, "bread"));
  TermPtr g = t_base(gen_of(s, "eat"));
  TraceBuilder tb(t_vcomp(f, g));
  tb.struct_step({}, StructLaw::FuseSeq, Orient::Fwd);
  Trace tr = tb.finish();
  CHECK(term_eq(replay(tr), tr.end));
  Trace bad = tr;
  bad.steps[0].pos = {0};
  CHECK_THROWS_AS(replay(bad), Error);
}
