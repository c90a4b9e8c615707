#include <catch2/catch_amalgamated.hpp>

#include "cornering/protocol.hpp"
#include "support.hpp"

using namespace cornering;

TEST_CASE("concatenation is a monoid by construction") {
  ProtocolWord u = proto_word(proto_send({"A"}));
  ProtocolWord v = {proto_recv({"B"}), proto_recv({"A"})};
  CHECK(proto_concat(proto_unit(), u) == u);
  CHECK(proto_concat(u, proto_unit()) == u);
  ProtocolWord uv = proto_concat(u, v);
  REQUIRE(uv.size() == 3);
  CHECK(uv[0].kind == ProtoKind::Send);
  CHECK(uv[2].payload == ObjectWord{"A"});
  ProtocolWord w = proto_word(proto_plus(u, v));
  CHECK(proto_concat(proto_concat(u, v), w) == proto_concat(u, proto_concat(v, w)));
}

TEST_CASE("atomic exchanges") {
  ProtocolWord u = proto_word(proto_send({"A"}));
  ProtocolWord w = proto_word(proto_recv({"B"}));
  CHECK(is_atomic(proto_word(proto_times(u, w))));
  CHECK(is_atomic(u));
  CHECK_FALSE(is_atomic(proto_concat(u, w)));
  CHECK(is_unit(proto_unit()));
  CHECK_FALSE(is_atomic(proto_unit()));
}

TEST_CASE("the vending protocol is reflexively equal") {
  // V = ($2! . Cig?) + (($1! . Gum?) + ($2! . Gum? . $1?))
  ProtocolWord v1 = {proto_send({"$2"}), proto_recv({"Cig"})};
  ProtocolWord v2 = {proto_send({"$1"}), proto_recv({"Gum"})};
  ProtocolWord v3 = {proto_send({"$2"}), proto_recv({"Gum"}), proto_recv({"$1"})};
  ProtocolWord v = proto_word(proto_plus(v1, proto_word(proto_plus(v2, v3))));
  CHECK(proto_eq(v, v));
  CHECK(is_atomic(v));
  CHECK_FALSE(proto_eq(v, v1));
}

TEST_CASE("printing protocols") {
  ProtocolWord v1 = {proto_send({"$2"}), proto_recv({"Cig"})};
  CHECK(proto_str(v1) == "$2! . Cig?");
  CHECK(proto_str(proto_unit()) == "1");
  CHECK(proto_str(proto_word(proto_plus(v1, proto_unit()))) ==
        "($2! . Cig? + 1)");
  CHECK(proto_str(proto_word(proto_send({"Gum", "$1"}))) == "(Gum * $1)!");
}
