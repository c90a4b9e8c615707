#pragma once

#include <string>
#include <vector>

#include "cornering/word.hpp"

namespace cornering {

// The exchange monoid over the base objects. A word is a flat list of
// atoms, so the monoid unit and associativity laws hold definitionally;
// the empty word is I. Atoms are the expressions whose main connective
// is not concatenation.
struct ProtocolAtom;
using ProtocolWord = std::vector<ProtocolAtom>;

enum class ProtoKind : uint8_t {
  Send,   // A!  -- left participant sends an instance of A
  Recv,   // A?  -- right participant sends an instance of A
  Plus,   // U + W -- left participant chooses
  Times,  // U & W -- right participant chooses
};

struct ProtocolAtom {
  ProtoKind kind = ProtoKind::Send;
  ObjectWord payload;            // Send/Recv
  std::vector<ProtocolAtom> fst; // Plus/Times
  std::vector<ProtocolAtom> snd; // Plus/Times

  friend bool operator==(const ProtocolAtom& a, const ProtocolAtom& b) {
    return a.kind == b.kind && a.payload == b.payload && a.fst == b.fst &&
           a.snd == b.snd;
  }
  friend bool operator!=(const ProtocolAtom& a, const ProtocolAtom& b) {
    return !(a == b);
  }
};

inline ProtocolAtom proto_send(ObjectWord a) {
  ProtocolAtom p;
  p.kind = ProtoKind::Send;
  p.payload = std::move(a);
  return p;
}

inline ProtocolAtom proto_recv(ObjectWord a) {
  ProtocolAtom p;
  p.kind = ProtoKind::Recv;
  p.payload = std::move(a);
  return p;
}

inline ProtocolAtom proto_plus(ProtocolWord u, ProtocolWord w) {
  ProtocolAtom p;
  p.kind = ProtoKind::Plus;
  p.fst = std::move(u);
  p.snd = std::move(w);
  return p;
}

inline ProtocolAtom proto_times(ProtocolWord u, ProtocolWord w) {
  ProtocolAtom p;
  p.kind = ProtoKind::Times;
  p.fst = std::move(u);
  p.snd = std::move(w);
  return p;
}

inline ProtocolWord proto_unit() { return {}; }

inline ProtocolWord proto_word(ProtocolAtom a) {
  ProtocolWord w;
  w.push_back(std::move(a));
  return w;
}

inline ProtocolWord proto_concat(const ProtocolWord& u, const ProtocolWord& w) {
  ProtocolWord r = u;
  r.insert(r.end(), w.begin(), w.end());
  return r;
}

inline ProtocolWord proto_slice(const ProtocolWord& w, std::size_t from, std::size_t to) {
  return ProtocolWord(w.begin() + static_cast<std::ptrdiff_t>(from),
                      w.begin() + static_cast<std::ptrdiff_t>(to));
}

inline bool proto_eq(const ProtocolWord& u, const ProtocolWord& w) { return u == w; }

inline bool is_unit(const ProtocolWord& u) { return u.empty(); }

inline bool is_atomic(const ProtocolWord& u) { return u.size() == 1; }

inline std::size_t proto_atom_hash(const ProtocolAtom& a);

inline std::size_t proto_hash(const ProtocolWord& w) {
  std::size_t h = 0x100001b3ull;
  for (const auto& a : w) h = hash_mix(h, proto_atom_hash(a));
  return h;
}

inline std::size_t proto_atom_hash(const ProtocolAtom& a) {
  std::size_t h = static_cast<std::size_t>(a.kind) * 0x9e3779b9ull;
  h = hash_mix(h, word_hash(a.payload));
  h = hash_mix(h, proto_hash(a.fst));
  h = hash_mix(h, proto_hash(a.snd));
  return h;
}

inline std::string proto_str(const ProtocolWord& w);

inline std::string proto_atom_str(const ProtocolAtom& a) {
  switch (a.kind) {
    case ProtoKind::Send:
    case ProtoKind::Recv: {
      std::string mark = a.kind == ProtoKind::Send ? "!" : "?";
      if (a.payload.size() == 1) return a.payload[0] + mark;
      return "(" + word_str(a.payload) + ")" + mark;
    }
    case ProtoKind::Plus:
      return "(" + proto_str(a.fst) + " + " + proto_str(a.snd) + ")";
    case ProtoKind::Times:
      return "(" + proto_str(a.fst) + " & " + proto_str(a.snd) + ")";
  }
  return "?";
}

inline std::string proto_str(const ProtocolWord& w) {
  if (w.empty()) return "1";
  std::string out;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (i) out += " . ";
    out += proto_atom_str(w[i]);
  }
  return out;
}

}  // namespace cornering
