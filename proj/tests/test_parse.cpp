#include <catch2/catch_amalgamated.hpp>

#include <fstream>
#include <sstream>

#include "cornering/coherence.hpp"
#include "cornering/parse.hpp"
#include "support.hpp"

using namespace cornering;
using namespace cornering::testing;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  REQUIRE(in.good());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("empty input gives an empty workspace") {
  Workspace ws = parse_workspace("");
  CHECK(ws.signature.objects.empty());
  CHECK(ws.terms.empty());
}

TEST_CASE("declarations with unknown names are rejected with positions") {
  try {
    parse_workspace("mor g : $1 -> Gum;");
    FAIL("expected a diagnostic");
  } catch (const ParseError& e) {
    CHECK(e.diagnostic.line == 1);
    CHECK(e.diagnostic.message.find("$1") != std::string::npos);
  }
  CHECK_THROWS_AS(parse_workspace("object A; term t = undefined;"), ParseError);
  CHECK_THROWS_AS(parse_workspace("object A; object A;"), ParseError);
}

TEST_CASE("the vending workspace loads and matches the by-hand terms") {
  Workspace ws = parse_workspace(slurp(std::string(SAMPLES_DIR) + "/vending.corn"));
  REQUIRE(ws.find_term("M"));
  REQUIRE(ws.find_term("C1_M"));
  const ProtocolWord* v = ws.find_protocol("V");
  REQUIRE(v);
  CHECK(is_atomic(*v));

  TermPtr m = ws.find_term("M");
  CHECK(m->type.left == *v);
  CHECK(is_vertical(t_hcomp(ws.find_term("C1"), m)));

  Signature s = vending_sig();
  VerticalNormal n = normalize_vertical(ws.find_term("C1_M"));
  CHECK(base_eq(n.f, gen_of(s, "c")));
}

TEST_CASE("the bakery workspace loads with its rules") {
  Workspace ws = parse_workspace(slurp(std::string(SAMPLES_DIR) + "/bakery.corn"));
  REQUIRE(ws.rules.size() == 2);
  CHECK(ws.rules[0].name == "make_bread");
  CHECK(ws.rules[0].measure_drop == 3);
  REQUIRE(ws.find_term("E_B"));
  ReduceResult r = reduce_combined(ws.find_term("E_B"), ws.rules);
  REQUIRE(r.term->kind == TermKind::Base);
  CHECK(r.term->base == mor_id({}));
}

TEST_CASE("terms round-trip through printing") {
  Workspace ws = parse_workspace(slurp(std::string(SAMPLES_DIR) + "/vending.corn"));
  for (const auto& [name, t] : ws.terms) {
    INFO(name);
    TermPtr again = parse_term(term_str(t), ws);
    REQUIRE(again);
    CHECK(term_eq(again, t));
  }
}

TEST_CASE("random terms round-trip through printing") {
  Signature s = fourgen_sig();
  Workspace ws;
  ws.signature = s;
  for (std::uint64_t seed = 0; seed < 60; ++seed) {
    TermPtr t = gen_term(s, seed, 14, GenTarget::Arbitrary);
    TermPtr again = parse_term(term_str(t), ws);
    REQUIRE(again);
    CHECK(term_eq(again, t));
  }
}

TEST_CASE("protocol and corner syntax") {
  Workspace ws = parse_workspace(
      "object A; object B;"
      "protocol P = (A * B)! . A?;"
      "term t = (A * B)^> . ([1@(A * B)]) . (A * B)_<;"
      "term u = I^>;"
      "term v = id@(A! + 1);");
  const ProtocolWord* p = ws.find_protocol("P");
  REQUIRE(p);
  REQUIRE(p->size() == 2);
  CHECK((*p)[0].payload == ObjectWord{"A", "B"});
  CHECK(ws.find_term("t")->type.left == proto_word(proto_send({"A", "B"})));
  CHECK(ws.find_term("u")->type.left == proto_word(proto_send({})));
  TermPtr v = ws.find_term("v");
  REQUIRE(v);
  CHECK(v->type.left.size() == 1);
  CHECK(v->type.left[0].kind == ProtoKind::Plus);
}

TEST_CASE("choice operators require parentheses") {
  CHECK_THROWS_AS(parse_workspace("object A; term t = A^> (+) A^> (+) A^>;"),
                  ParseError);
}

TEST_CASE("type ascriptions are verified") {
  CHECK_THROWS_AS(
      parse_workspace("object A; term t : <I | A -> A | I> = A_>;"),
      ParseError);
}
