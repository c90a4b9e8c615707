#include <catch2/catch_amalgamated.hpp>

#include "cornering/coherence.hpp"
#include "cornering/split.hpp"
#include "support.hpp"

using namespace cornering;
using namespace cornering::testing;

namespace {

TermPtr vending_machine() {
  Signature s = vending_sig();
  auto m1 = t_vcomp(t_vcomp(t_corner_ur({"$2"}), t_base(gen_of(s, "c"))),
                    t_corner_lr({"Cig"}));
  auto m2 = t_vcomp(t_vcomp(t_corner_ur({"$1"}), t_base(gen_of(s, "g"))),
                    t_corner_lr({"Gum"}));
  auto m3 = t_vcomp(t_vcomp(t_vcomp(t_corner_ur({"$2"}), t_base(gen_of(s, "g'"))),
                            t_hcomp(t_corner_lr({"Gum"}), t_vid({"$1"}))),
                    t_corner_lr({"$1"}));
  return t_sum(m1, t_sum(m2, m3));
}

ProtocolWord v1() { return {proto_send({"$2"}), proto_recv({"Cig"})}; }
ProtocolWord v2() { return {proto_send({"$1"}), proto_recv({"Gum"})}; }
ProtocolWord v3() {
  return {proto_send({"$2"}), proto_recv({"Gum"}), proto_recv({"$1"})};
}
ProtocolWord v23() { return proto_word(proto_plus(v2(), v3())); }

TermPtr customer1() {
  return t_hcomp(t_vcomp(t_corner_ll({"$2"}), t_corner_ul({"Cig"})),
                 t_inj(0, v1(), v23()));
}

TermPtr customer2() {
  return t_hcomp(t_hcomp(t_vcomp(t_corner_ll({"$1"}), t_corner_ul({"Gum"})),
                         t_inj(0, v2(), v3())),
                 t_inj(1, v1(), v23()));
}

TermPtr customer3() {
  auto body = t_vcomp(t_vcomp(t_corner_ll({"$2"}), t_corner_ul({"Gum"})),
                      t_hcomp(t_vid({"Gum"}), t_corner_ul({"$1"})));
  return t_hcomp(t_hcomp(body, t_inj(1, v2(), v3())), t_inj(1, v1(), v23()));
}

TermPtr eater() {
  Signature s = bakery_sig();
  return t_vcomp(t_vcomp(t_vcomp(t_base(gen_of(s, "water")), t_corner_ll({"Ingr"})),
                         t_corner_ul({"Food"})),
                 t_base(gen_of(s, "eat")));
}

TermPtr baker() {
  Signature s = bakery_sig();
  return t_vcomp(
      t_vcomp(t_vcomp(t_vcomp(t_base(gen_of(s, "flour")),
                              t_hcomp(t_corner_ur({"Ingr"}), t_vid({"Ingr"}))),
                      t_base(gen_of(s, "mix"))),
              t_base(gen_of(s, "bake"))),
      t_corner_lr({"Food"}));
}

void check_pop(const TermPtr& t) {
  PopResult r = pop(t);
  INFO(term_str(t));
  CHECK(is_popped(r.term).has_value());
  CHECK(term_eq(replay(r.trace), r.term));
  CHECK(r.term->type == t->type);
  // interaction steps strictly decrease the measure, structural steps
  // preserve it
  TermPtr cur = r.trace.start;
  for (const auto& st : r.trace.steps) {
    TermPtr next = apply_step(cur, st);
    if (st.kind == StepKind::Beta)
      CHECK(count_special(next) < count_special(cur));
    else
      CHECK(count_special(next) == count_special(cur));
    cur = next;
  }
}

}  // namespace

TEST_CASE("popped-shape recognizer") {
  Signature s = bakery_sig();
  CHECK(is_popped(t_base(gen_of(s, "bread")))->shape == PopShape::Flat);
  CHECK_FALSE(is_popped(t_corner_ll({"A"})).has_value());
  TermPtr proj_stage =
      t_hcomp(t_vcomp(t_proj(0, proto_word(proto_send({"A"})),
                             proto_word(proto_recv({"A"}))),
                      t_hid({})),
              t_hid(proto_word(proto_send({"A"}))));
  auto d = is_popped(proj_stage);
  REQUIRE(d.has_value());
  CHECK(d->shape == PopShape::ProjStage);
  CHECK(d->index == 0);
}

TEST_CASE("pop on every leaf constructor") {
  Signature s = bakery_sig();
  check_pop(t_base(gen_of(s, "mix")));
  check_pop(t_vid({"Ingr", "Food"}));
  check_pop(t_vid({}));
  check_pop(t_hid({}));
  check_pop(t_hid(proto_word(proto_send({"Ingr"}))));
  check_pop(t_hid({proto_send({"Ingr"}), proto_recv({"Food"})}));
  check_pop(t_corner_ur({"A"}));
  check_pop(t_corner_ul({"A"}));
  check_pop(t_corner_ll({"A"}));
  check_pop(t_corner_lr({"A"}));
  check_pop(t_proj(0, proto_word(proto_send({"A"})), proto_word(proto_recv({"B"}))));
  check_pop(t_proj(1, proto_word(proto_send({"A"})), proto_word(proto_recv({"B"}))));
  check_pop(t_inj(0, proto_word(proto_send({"A"})), proto_word(proto_recv({"B"}))));
  check_pop(t_inj(1, proto_word(proto_send({"A"})), proto_word(proto_recv({"B"}))));
  TermPtr branch = t_corner_ll({"A"});
  check_pop(t_sum(branch, branch));
  check_pop(t_prod(branch, branch));
}

TEST_CASE("pop of a receive corner matches the stated shape") {
  PopResult r = pop(t_corner_ur({"A"}));
  CHECK(r.form.shape == PopShape::RecvLeft);
  CHECK(r.form.whisker.empty());
  CHECK(term_eq(r.form.residual, t_vid({"A"})));
  CHECK(eq_struct_bounded(t_corner_ur({"A"}), r.term, 4) == Bounded::Equal);
}

TEST_CASE("pop handles vertical composites of corners") {
  check_pop(t_vcomp(t_corner_ll({"A"}), t_corner_ul({"B"})));
  check_pop(t_vcomp(t_corner_ur({"A"}), t_corner_ll({"A"})));
  Signature s = bakery_sig();
  check_pop(t_vcomp(t_base(gen_of(s, "water")), t_corner_ll({"Ingr"})));
  check_pop(t_vcomp(t_vcomp(t_base(gen_of(s, "water")), t_corner_ll({"Ingr"})),
                    t_corner_ul({"Food"})));
}

TEST_CASE("pop eliminates facing corners") {
  TermPtr yank = t_hcomp(t_corner_ll({"A"}), t_corner_ur({"A"}));
  PopResult r = pop(yank);
  CHECK(r.form.shape == PopShape::Flat);
  CHECK(r.form.f == mor_id({"A"}));
  bool has_beta = false;
  for (const auto& st : r.trace.steps) has_beta |= st.kind == StepKind::Beta;
  CHECK(has_beta);

  TermPtr yank2 = t_hcomp(t_corner_ul({"A"}), t_corner_lr({"A"}));
  PopResult r2 = pop(yank2);
  CHECK(r2.form.shape == PopShape::Flat);
  CHECK(r2.form.f == mor_id({"A"}));
}

TEST_CASE("pop resolves choices") {
  // inj0 | (a0 + a1) reduces into the first branch
  TermPtr b0 = t_corner_ur({"A"});
  TermPtr b1 = t_vcomp(t_corner_ur({"A"}), t_vid({"A"}));
  TermPtr sum = t_sum(b0, b1);
  TermPtr inj = t_inj(0, b0->type.left, b1->type.left);
  PopResult r = pop(t_hcomp(inj, sum));
  CHECK(is_popped(r.term).has_value());
  bool has_beta = false;
  for (const auto& st : r.trace.steps) has_beta |= st.kind == StepKind::Beta;
  CHECK(has_beta);
}

TEST_CASE("the three vending customers flatten to their purchases") {
  Signature s = vending_sig();
  TermPtr m = vending_machine();

  VerticalNormal n1 = normalize_vertical(t_hcomp(customer1(), m));
  CHECK(base_eq(n1.f, gen_of(s, "c")));

  VerticalNormal n2 = normalize_vertical(t_hcomp(customer2(), m));
  CHECK(base_eq(n2.f, gen_of(s, "g")));

  VerticalNormal n3 = normalize_vertical(t_hcomp(customer3(), m));
  CHECK(base_eq(n3.f, gen_of(s, "g'")));

  // customer 1's run resolves one choice and two exchanges
  std::size_t betas = 0;
  for (const auto& st : n1.trace.steps)
    if (st.kind == StepKind::Beta) ++betas;
  CHECK(betas == 3);
}

TEST_CASE("the bakery pair reduces to nothing") {
  Signature s = bakery_sig();
  auto rules = bakery_rules();
  TermPtr meal = t_hcomp(eater(), baker());
  ReduceConfig cfg;
  ReduceResult r = reduce_combined(meal, rules, cfg);
  REQUIRE(r.term->kind == TermKind::Base);
  CHECK(r.term->base == mor_id({}));
  std::size_t fired_make = 0, fired_eat = 0;
  for (const auto& st : r.trace.steps) {
    if (st.kind == StepKind::BaseRw && st.rule == "make_bread") ++fired_make;
    if (st.kind == StepKind::BaseRw && st.rule == "eat_bread") ++fired_eat;
  }
  CHECK(fired_make >= 1);
  CHECK(fired_eat >= 1);
  CHECK(term_eq(replay(r.trace, &rules), r.term));
}

TEST_CASE("pop terminates with valid traces on random terms") {
  Signature s = fourgen_sig();
  for (std::uint64_t seed = 0; seed < 120; ++seed) {
    TermPtr t = gen_term(s, seed, 18, GenTarget::Arbitrary);
    check_pop(t);
  }
}

TEST_CASE("vertical terms always pop to a plain base cell") {
  Signature s = fourgen_sig();
  for (std::uint64_t seed = 0; seed < 80; ++seed) {
    TermPtr t = gen_term(s, seed, 16, GenTarget::Vertical);
    PopResult r = pop(t);
    CHECK(r.form.shape == PopShape::Flat);
  }
}

TEST_CASE("splitting the eater at the exchange boundary") {
  TermPtr e = eater();
  REQUIRE(e->type.right.size() == 2);
  SplitResult sr = split_base(e, SplitSide::LeftClosed, 1);
  CHECK(sr.a0->type.right == proto_word(proto_send({"Ingr"})));
  CHECK(sr.a1->type.right == proto_word(proto_recv({"Food"})));
  CHECK(sr.a0->type.left.empty());
  CHECK(sr.a1->type.left.empty());
  CHECK(sr.a0->type.bottom == sr.a1->type.top);
  CHECK(term_eq(replay(sr.trace), t_vcomp(sr.a0, sr.a1)));

  // closing both the original and the decomposition gives the same cell
  Signature s = bakery_sig();
  TermGen g(s, 5, 8);
  TermPtr r = g.right_participant_for(e->type.right);
  VerticalNormal left = normalize_vertical(t_hcomp(e, r));
  VerticalNormal right = normalize_vertical(t_hcomp(t_vcomp(sr.a0, sr.a1), r));
  CHECK(base_eq(left.f, right.f));
}

TEST_CASE("splits at every boundary point of random closed terms") {
  Signature s = fourgen_sig();
  int done = 0;
  for (std::uint64_t seed = 0; seed < 60 && done < 30; ++seed) {
    TermPtr t = gen_term(s, seed, 12, GenTarget::LeftClosed);
    if (t->type.right.size() < 2) continue;
    for (std::size_t k = 0; k <= t->type.right.size(); ++k) {
      SplitResult sr = split_base(t, SplitSide::LeftClosed, k);
      CHECK(sr.a0->type.right ==
            proto_slice(t->type.right, 0, k));
      CHECK(sr.a1->type.right ==
            proto_slice(t->type.right, k, t->type.right.size()));
      CHECK(term_eq(replay(sr.trace), t_vcomp(sr.a0, sr.a1)));
    }
    ++done;
  }
  CHECK(done == 30);
}

TEST_CASE("right-closed splits mirror") {
  Signature s = fourgen_sig();
  int done = 0;
  for (std::uint64_t seed = 0; seed < 60 && done < 20; ++seed) {
    TermPtr t = gen_term(s, seed, 12, GenTarget::RightClosed);
    if (t->type.left.size() < 2) continue;
    for (std::size_t k = 0; k <= t->type.left.size(); ++k) {
      SplitResult sr = split_base(t, SplitSide::RightClosed, k);
      CHECK(sr.a0->type.left == proto_slice(t->type.left, 0, k));
      CHECK(sr.a1->type.left ==
            proto_slice(t->type.left, k, t->type.left.size()));
      CHECK(term_eq(replay(sr.trace), t_vcomp(sr.a0, sr.a1)));
    }
    ++done;
  }
  CHECK(done == 20);
}

TEST_CASE("context decomposition agrees with its trace") {
  Signature s = fourgen_sig();
  TermGen g(s, 31, 8);
  TermPtr hole = t_prod(t_corner_ll({"A"}), t_corner_ll({"A"}));
  LeftContext l = lctx_hole(hole->type.left, hole->type.bottom);
  l = l.with_par(gen_term(s, 77, 5, GenTarget::Vertical));
  CtxDecomp d = context_decompose(l, t_vid({"B"}));
  // b | L[c] ->* (lambda0 | c) . lambda1 for this c
  TermPtr lhs = t_hcomp(t_vid({"B"}), lctx_subst(l, hole));
  TermPtr rhs = t_vcomp(t_hcomp(d.lambda0, hole), d.lambda1);
  CHECK(lhs->type == rhs->type);
  // both close to the same vertical cell
  TermGen g2(s, 32, 8);
  TermPtr r = g2.right_participant_for(lhs->type.right);
  CHECK(base_eq(normalize_vertical(t_hcomp(lhs, r)).f,
                normalize_vertical(t_hcomp(rhs, r)).f));
}

TEST_CASE("reduction strategies agree on vertical cells") {
  Signature s = fourgen_sig();
  for (std::uint64_t seed = 0; seed < 25; ++seed) {
    TermPtr t = gen_term(s, seed, 14, GenTarget::Vertical);
    ReduceConfig pop_first;
    ReduceConfig inter;
    inter.strategy = Strategy::Interleaved;
    inter.seed = seed * 31 + 7;
    ReduceConfig exh;
    exh.strategy = Strategy::Exhaustive;
    BaseMor a = normalize_vertical(t, {}, pop_first).f;
    ReduceResult ri = reduce_combined(t, {}, inter);
    ReduceResult re = reduce_combined(t, {}, exh);
    REQUIRE(ri.term->kind == TermKind::Base);
    REQUIRE(re.term->kind == TermKind::Base);
    CHECK(base_eq(a, ri.term->base));
    CHECK(base_eq(a, re.term->base));
  }
}
