#include <catch2/catch_amalgamated.hpp>

#include "cornering/print.hpp"
#include "cornering/term.hpp"
#include "support.hpp"

using namespace cornering;
using namespace cornering::testing;

namespace {

// The machine term M of the vending example.
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

}  // namespace

TEST_CASE("corner boundaries") {
  TermPtr ur = t_corner_ur({"A"});
  CHECK(ur->type.left == proto_word(proto_send({"A"})));
  CHECK(ur->type.top.empty());
  CHECK(ur->type.bottom == ObjectWord{"A"});
  CHECK(ur->type.right.empty());

  TermPtr ll = t_corner_ll({"A"});
  CHECK(ll->type.right == proto_word(proto_send({"A"})));
  TermPtr ul = t_corner_ul({"A"});
  CHECK(ul->type.right == proto_word(proto_recv({"A"})));
  TermPtr lr = t_corner_lr({"A"});
  CHECK(lr->type.left == proto_word(proto_recv({"A"})));
}

TEST_CASE("the machine term types as a right participant of V") {
  TermPtr m = vending_machine();
  ProtocolWord v1 = {proto_send({"$2"}), proto_recv({"Cig"})};
  ProtocolWord v2 = {proto_send({"$1"}), proto_recv({"Gum"})};
  ProtocolWord v3 = {proto_send({"$2"}), proto_recv({"Gum"}), proto_recv({"$1"})};
  ProtocolWord v = proto_word(proto_plus(v1, proto_word(proto_plus(v2, v3))));
  CHECK(m->type.left == v);
  CHECK(m->type.top.empty());
  CHECK(m->type.bottom.empty());
  CHECK(m->type.right.empty());
}

TEST_CASE("identity cell boundaries") {
  TermPtr idl = t_hid({});
  CHECK(idl->type == CellType{{}, {}, {}, {}});
  TermPtr one = t_vid({});
  CHECK(one->type == CellType{{}, {}, {}, {}});
}

TEST_CASE("boundary mismatches are rejected") {
  Signature s = vending_sig();
  CHECK_THROWS_AS(t_vcomp(t_base(gen_of(s, "c")), t_base(gen_of(s, "g"))),
                  BoundaryMismatch);
  CHECK_THROWS_AS(t_hcomp(t_corner_ll({"A"}), t_corner_ur({"B"})),
                  BoundaryMismatch);
  CHECK_THROWS_AS(t_sum(t_vid({"Gum"}), t_vid({"Cig"})), BoundaryMismatch);
}

TEST_CASE("special counting follows the defining clauses") {
  Signature s = vending_sig();
  CHECK(count_special(t_base(gen_of(s, "c"))) == 0);
  CHECK(count_special(t_vid({"Gum"})) == 0);
  CHECK(count_special(t_hid(proto_word(proto_send({"Gum"})))) == 0);
  CHECK(count_special(t_corner_ur({"A"})) == 1);
  CHECK(count_special(t_proj(0, {}, {})) == 1);
  TermPtr pair = t_hcomp(t_corner_ll({"A"}), t_corner_ur({"A"}));
  CHECK(count_special(pair) == 2);
  TermPtr m = vending_machine();
  // each branch has two or three corners, plus two sum nodes
  CHECK(count_special(m) == 2 + (2 + 2) + 3);
}

TEST_CASE("the eater and baker terms") {
  Signature s = bakery_sig();
  TermPtr eater = t_vcomp(t_vcomp(t_vcomp(t_base(gen_of(s, "water")),
                                          t_corner_ll({"Ingr"})),
                                  t_corner_ul({"Food"})),
                          t_base(gen_of(s, "eat")));
  CHECK(eater->type ==
        CellType{{}, {}, {}, {proto_send({"Ingr"}), proto_recv({"Food"})}});
  TermPtr baker = t_vcomp(
      t_vcomp(t_vcomp(t_vcomp(t_base(gen_of(s, "flour")),
                              t_hcomp(t_corner_ur({"Ingr"}), t_vid({"Ingr"}))),
                      t_base(gen_of(s, "mix"))),
              t_base(gen_of(s, "bake"))),
      t_corner_lr({"Food"}));
  CHECK(baker->type ==
        CellType{{proto_send({"Ingr"}), proto_recv({"Food"})}, {}, {}, {}});
  TermPtr meal = t_hcomp(eater, baker);
  CHECK(is_vertical(meal));
}

TEST_CASE("paths address subterms") {
  TermPtr pair = t_hcomp(t_corner_ll({"A"}), t_corner_ur({"A"}));
  CHECK(subterm_at(pair, {0})->kind == TermKind::CornerLL);
  CHECK(subterm_at(pair, {1})->kind == TermKind::CornerUR);
  TermPtr swapped = replace_at(pair, {0}, t_corner_ll({"A"}));
  CHECK(term_eq(swapped, pair));
  CHECK_THROWS_AS(subterm_at(pair, {0, 1}), InvalidPosition);
}

TEST_CASE("printing round structure") {
  Signature s = vending_sig();
  TermPtr t = t_vcomp(t_corner_ur({"$2"}), t_base(gen_of(s, "c")));
  CHECK(term_str(t) == "$2^> . [c]");
  TermPtr u = t_hcomp(t_corner_ll({"A"}), t_corner_ur({"A"}));
  CHECK(term_str(u) == "A_> | A^>");
  TermPtr nested = t_vcomp(t_vid({"A"}), t_vcomp(t_vid({"A"}), t_vid({"A"})));
  CHECK(term_str(nested) == "1@A . (1@A . 1@A)");
}
