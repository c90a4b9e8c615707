#pragma once

#include <deque>
#include <map>
#include <optional>
#include <random>

#include "cornering/term.hpp"

namespace cornering {

enum class GenTarget : uint8_t {
  Vertical,
  ZeroSpecialVertical,
  LeftClosed,   // <1 | A -> B | P>, the left participant of its protocol
  RightClosed,  // <P | A -> B | 1>
  Arbitrary,
};

// Type-directed random generation over a signature. Deterministic in the
// seed. Interaction content is produced as matched participant pairs, so
// every generated protocol obligation is dischargeable; payload resources
// are produced and disposed through searched base-morphism bridges.
class TermGen {
 public:
  TermGen(const Signature& sig, std::uint64_t seed, std::size_t size)
      : sig_(sig), rng_(seed), size_(size ? size : 1) {}

  TermPtr vertical() {
    budget_ = size_;
    TermPtr t = gen_vertical();
    return t;
  }

  TermPtr zero_special_vertical() {
    budget_ = size_;
    return gen_zero_special();
  }

  TermPtr left_closed() {
    budget_ = size_;
    ProtocolWord p = gen_protocol(2);
    if (p.empty()) p = proto_word(gen_atom(1));
    return left_participant(p, false);
  }

  TermPtr right_closed() {
    budget_ = size_;
    ProtocolWord p = gen_protocol(2);
    if (p.empty()) p = proto_word(gen_atom(1));
    return right_participant(p, false);
  }

  TermPtr arbitrary() {
    budget_ = size_;
    TermPtr t;
    switch (rng_() % 4) {
      case 0: t = gen_vertical(); break;
      case 1: t = left_participant(gen_protocol(2), false); break;
      case 2: t = right_participant(gen_protocol(2), false); break;
      default: t = gen_zero_special(); break;
    }
    // A random subterm exercises arbitrary boundaries.
    for (int hop = rng_() % 4; hop > 0 && t->fst; --hop)
      t = rng_() % 2 ? t->fst : t->snd;
    return t;
  }

  TermPtr left_participant_for(const ProtocolWord& p) {
    budget_ = size_;
    return left_participant(p, false);
  }

  TermPtr right_participant_for(const ProtocolWord& p) {
    budget_ = size_;
    return right_participant(p, false);
  }

  ProtocolWord protocol(std::size_t depth = 2) { return gen_protocol(depth); }

  // Shortest generator chain from one object word to another, found by
  // breadth-first search over single whiskered generator applications.
  std::optional<BaseMor> bridge(const ObjectWord& from, const ObjectWord& to) {
    auto key = std::make_pair(word_str(from), word_str(to));
    auto it = bridge_cache_.find(key);
    if (it != bridge_cache_.end()) return it->second;
    std::optional<BaseMor> result = bridge_search(from, to);
    bridge_cache_[key] = result;
    return result;
  }

 private:
  const Signature& sig_;
  std::mt19937_64 rng_;
  std::size_t size_;
  std::size_t budget_ = 0;
  std::map<std::pair<std::string, std::string>, std::optional<BaseMor>> bridge_cache_;

  bool spend(std::size_t n = 1) {
    if (budget_ < n) return false;
    budget_ -= n;
    return true;
  }

  ObjectWord gen_object_word(std::size_t max_len) {
    ObjectWord w;
    if (sig_.objects.empty()) return w;
    std::size_t n = rng_() % (max_len + 1);
    for (std::size_t i = 0; i < n; ++i)
      w.push_back(sig_.objects[rng_() % sig_.objects.size()].name);
    return w;
  }

  ObjectWord gen_payload() {
    ObjectWord w = gen_object_word(2);
    if (w.empty() && !sig_.objects.empty())
      w.push_back(sig_.objects[rng_() % sig_.objects.size()].name);
    return w;
  }

  ProtocolAtom gen_atom(std::size_t depth) {
    if (depth > 0 && rng_() % 4 == 0) {
      ProtocolWord u = gen_protocol(depth - 1);
      ProtocolWord w = gen_protocol(depth - 1);
      return rng_() % 2 ? proto_plus(u, w) : proto_times(u, w);
    }
    ObjectWord c = gen_payload();
    return rng_() % 2 ? proto_send(c) : proto_recv(c);
  }

  ProtocolWord gen_protocol(std::size_t depth) {
    ProtocolWord p;
    std::size_t n = 1 + rng_() % 3;
    for (std::size_t i = 0; i < n; ++i) p.push_back(gen_atom(depth));
    return p;
  }

  std::optional<BaseMor> bridge_search(const ObjectWord& from, const ObjectWord& to) {
    const std::size_t word_cap = std::max<std::size_t>(from.size() + 3, to.size() + 3);
    const std::size_t state_cap = 4096;
    std::map<std::string, std::pair<std::string, Slice>> parent;
    std::deque<ObjectWord> queue{from};
    parent[word_str(from)] = {word_str(from), Slice{}};
    while (!queue.empty() && parent.size() < state_cap) {
      ObjectWord w = queue.front();
      queue.pop_front();
      if (w == to) {
        // reconstruct
        std::vector<Slice> rev;
        std::string cur = word_str(to);
        std::string start = word_str(from);
        while (cur != start) {
          auto& [prev, slice] = parent[cur];
          rev.push_back(slice);
          cur = prev;
        }
        std::reverse(rev.begin(), rev.end());
        return canonicalize(rev, from);
      }
      for (const auto& g : sig_.morphisms) {
        for (std::size_t pos = 0; pos + g.dom.size() <= w.size(); ++pos) {
          if (!std::equal(g.dom.begin(), g.dom.end(),
                          w.begin() + static_cast<std::ptrdiff_t>(pos)))
            continue;
          Slice s{word_slice(w, 0, pos), g,
                  word_slice(w, pos + g.dom.size(), w.size())};
          ObjectWord next = slice_out(s);
          if (next.size() > word_cap) continue;
          std::string k = word_str(next);
          if (parent.count(k)) continue;
          parent[k] = {word_str(w), s};
          queue.push_back(next);
        }
      }
    }
    return std::nullopt;
  }

  BaseMor bridge_or_id(const ObjectWord& from, const ObjectWord& to) {
    if (auto b = bridge(from, to)) return *b;
    throw Unsatisfiable("no base morphism bridges " + word_str(from) + " -> " +
                        word_str(to));
  }

  bool can_bridge(const ObjectWord& from, const ObjectWord& to) {
    return bridge(from, to).has_value();
  }

  // Stage for one protocol atom seen by the left participant, threaded
  // beside the current flow; neutral participants keep unit flow.
  TermPtr left_stage(const ProtocolAtom& atom, ObjectWord& flow) {
    switch (atom.kind) {
      case ProtoKind::Send: {
        const ObjectWord& c = atom.payload;
        // Produce the payload and hand it off to the right.
        TermPtr hand = t_vcomp(t_base(bridge_or_id({}, c)), t_corner_ll(c));
        return flow.empty() ? hand : t_hcomp(t_vid(flow), hand);
      }
      case ProtoKind::Recv: {
        const ObjectWord& c = atom.payload;
        TermPtr take = t_corner_ul(c);
        if (rng_() % 2 == 0 && can_bridge(c, {})) {
          take = t_vcomp(take, t_base(bridge_or_id(c, {})));
          return flow.empty() ? take : t_hcomp(t_vid(flow), take);
        }
        TermPtr stage = flow.empty() ? take : t_hcomp(t_vid(flow), take);
        flow = word_concat(flow, c);
        return stage;
      }
      case ProtoKind::Plus: {
        int i = static_cast<int>(rng_() % 2);
        TermPtr chosen = left_participant(i == 0 ? atom.fst : atom.snd, true);
        TermPtr stage = t_hcomp(chosen, t_inj(i, atom.fst, atom.snd));
        return flow.empty() ? stage : t_hcomp(t_vid(flow), stage);
      }
      case ProtoKind::Times: {
        TermPtr b0 = left_participant(atom.fst, true);
        TermPtr b1 = left_participant(atom.snd, true);
        TermPtr stage = t_prod(b0, b1);
        return flow.empty() ? stage : t_hcomp(t_vid(flow), stage);
      }
    }
    throw Error("unreachable");
  }

  TermPtr right_stage(const ProtocolAtom& atom, ObjectWord& flow) {
    switch (atom.kind) {
      case ProtoKind::Send: {
        const ObjectWord& c = atom.payload;
        TermPtr take = t_corner_ur(c);
        if (rng_() % 2 == 0 && can_bridge(c, {})) {
          TermPtr stage = t_vcomp(take, t_base(bridge_or_id(c, {})));
          return flow.empty() ? stage : t_hcomp(stage, t_vid(flow));
        }
        TermPtr stage = flow.empty() ? take : t_hcomp(take, t_vid(flow));
        flow = word_concat(c, flow);
        return stage;
      }
      case ProtoKind::Recv: {
        const ObjectWord& c = atom.payload;
        TermPtr hand = t_vcomp(t_base(bridge_or_id({}, c)), t_corner_lr(c));
        return flow.empty() ? hand : t_hcomp(hand, t_vid(flow));
      }
      case ProtoKind::Plus: {
        TermPtr b0 = right_participant(atom.fst, true);
        TermPtr b1 = right_participant(atom.snd, true);
        TermPtr stage = t_sum(b0, b1);
        return flow.empty() ? stage : t_hcomp(stage, t_vid(flow));
      }
      case ProtoKind::Times: {
        int i = static_cast<int>(rng_() % 2);
        TermPtr chosen = right_participant(i == 0 ? atom.fst : atom.snd, true);
        TermPtr stage = t_hcomp(t_proj(i, atom.fst, atom.snd), chosen);
        return flow.empty() ? stage : t_hcomp(stage, t_vid(flow));
      }
    }
    throw Error("unreachable");
  }

  TermPtr left_participant(const ProtocolWord& p, bool neutral) {
    ObjectWord flow = neutral ? ObjectWord{} : gen_object_word(1);
    TermPtr acc;
    ObjectWord top = flow;
    for (const auto& atom : p) {
      TermPtr stage = left_stage(atom, flow);
      acc = acc ? t_vcomp(acc, stage) : stage;
    }
    if (!acc) return t_vid(top);
    if (neutral && !flow.empty()) {
      // Dispose leftovers so branch boundaries agree.
      acc = t_vcomp(acc, t_base(bridge_or_id(flow, {})));
    }
    return acc;
  }

  TermPtr right_participant(const ProtocolWord& p, bool neutral) {
    ObjectWord flow = neutral ? ObjectWord{} : gen_object_word(1);
    TermPtr acc;
    ObjectWord top = flow;
    for (const auto& atom : p) {
      TermPtr stage = right_stage(atom, flow);
      acc = acc ? t_vcomp(acc, stage) : stage;
    }
    if (!acc) return t_vid(top);
    if (neutral && !flow.empty()) {
      acc = t_vcomp(acc, t_base(bridge_or_id(flow, {})));
    }
    return acc;
  }

  TermPtr gen_zero_special() {
    ObjectWord w = gen_object_word(2);
    TermPtr t = rng_() % 2 ? t_vid(w) : t_base(bridge_or_id(w, w));
    while (spend()) {
      switch (rng_() % 4) {
        case 0: {
          ObjectWord next = gen_object_word(2);
          if (can_bridge(t->type.bottom, next))
            t = t_vcomp(t, t_base(bridge_or_id(t->type.bottom, next)));
          break;
        }
        case 1: {
          ObjectWord next = gen_object_word(2);
          if (can_bridge(next, t->type.top))
            t = t_vcomp(t_base(bridge_or_id(next, t->type.top)), t);
          break;
        }
        case 2: {
          ObjectWord w2 = gen_object_word(1);
          t = rng_() % 2 ? t_hcomp(t, t_vid(w2)) : t_hcomp(t_vid(w2), t);
          break;
        }
        default: {
          if (rng_() % 3 == 0) t = t_vcomp(t_vid(t->type.top), t);
          break;
        }
      }
      if (rng_() % 3 == 0) break;
    }
    return t;
  }

  TermPtr gen_vertical() {
    TermPtr t = gen_vertical_piece();
    while (spend(2) && rng_() % 3 != 0) {
      TermPtr u = gen_vertical_piece();
      if (rng_() % 2 == 0) {
        t = t_hcomp(t, u);
      } else {
        // Vertical composition through a bridging base stage.
        if (can_bridge(t->type.bottom, u->type.top)) {
          t = t_vcomp(t_vcomp(t, t_base(bridge_or_id(t->type.bottom, u->type.top))), u);
        } else {
          t = t_hcomp(t, u);
        }
      }
    }
    return t;
  }

  TermPtr gen_vertical_piece() {
    if (!spend(4) || budget_ < 4) {
      ObjectWord w = gen_object_word(1);
      return rng_() % 2 ? t_vid(w) : t_base(bridge_or_id(w, w));
    }
    switch (rng_() % 5) {
      case 0: {
        ObjectWord w = gen_object_word(2);
        return t_vid(w);
      }
      case 1: {
        ObjectWord a = gen_object_word(2), b = gen_object_word(2);
        if (can_bridge(a, b)) return t_base(bridge_or_id(a, b));
        return t_vid(a);
      }
      default: {
        // Matched interaction pair: the central source of special cells.
        ProtocolWord p = gen_protocol(budget_ > 12 ? 2 : 1);
        TermPtr x = left_participant(p, false);
        TermPtr y = right_participant(p, false);
        return t_hcomp(x, y);
      }
    }
  }
};

// One-shot generation; deterministic in the seed.
inline TermPtr gen_term(const Signature& sig, std::uint64_t seed, std::size_t size,
                        GenTarget target) {
  TermGen g(sig, seed, size);
  switch (target) {
    case GenTarget::Vertical: return g.vertical();
    case GenTarget::ZeroSpecialVertical: return g.zero_special_vertical();
    case GenTarget::LeftClosed: return g.left_closed();
    case GenTarget::RightClosed: return g.right_closed();
    case GenTarget::Arbitrary: return g.arbitrary();
  }
  throw Error("unreachable");
}

}  // namespace cornering
