#pragma once

#include <algorithm>
#include <deque>
#include <map>
#include <tuple>
#include <unordered_set>
#include <functional>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "cornering/errors.hpp"
#include "cornering/signature.hpp"
#include "cornering/word.hpp"

namespace cornering {

// One layer of a morphism of the free monoidal category: a generator
// whiskered by identities, id_left (x) gen (x) id_right.
struct Slice {
  ObjectWord left;
  MorGen gen;
  ObjectWord right;

  friend bool operator==(const Slice& a, const Slice& b) {
    return a.left == b.left && a.gen == b.gen && a.right == b.right;
  }
};

// A morphism of the free monoidal category in sliced form. The stored
// slice list is always canonical: adjacent slices with disjoint
// footprints are ordered leftmost-footprint-first (ties by generator
// name), which makes structural equality decide equality of diagrams.
struct BaseMor {
  ObjectWord dom;
  std::vector<Slice> slices;

  friend bool operator==(const BaseMor& a, const BaseMor& b) {
    return a.dom == b.dom && a.slices == b.slices;
  }
  friend bool operator!=(const BaseMor& a, const BaseMor& b) { return !(a == b); }

  bool is_identity() const { return slices.empty(); }
};

inline std::size_t slice_hash(const Slice& s) {
  std::size_t h = word_hash(s.left);
  h = hash_mix(h, std::hash<std::string>{}(s.gen.name));
  h = hash_mix(h, word_hash(s.gen.dom));
  h = hash_mix(h, word_hash(s.gen.cod));
  h = hash_mix(h, word_hash(s.right));
  return h;
}

inline std::size_t base_hash(const BaseMor& f) {
  std::size_t h = word_hash(f.dom);
  for (const auto& s : f.slices) h = hash_mix(h, slice_hash(s));
  return h;
}

inline ObjectWord slice_in(const Slice& s) {
  return word_concat(word_concat(s.left, s.gen.dom), s.right);
}

inline ObjectWord slice_out(const Slice& s) {
  return word_concat(word_concat(s.left, s.gen.cod), s.right);
}

inline ObjectWord base_cod(const BaseMor& f) {
  if (f.slices.empty()) return f.dom;
  return slice_out(f.slices.back());
}

namespace detail {

// Positional slice representation: the generator plus the length of its
// left whisker at its own stage.
struct PosSlice {
  MorGen gen;
  std::size_t pos = 0;

  friend bool operator==(const PosSlice& a, const PosSlice& b) {
    return a.pos == b.pos && a.gen == b.gen;
  }
};

inline std::vector<Slice> replay(const ObjectWord& dom,
                                 const std::vector<PosSlice>& ps) {
  std::vector<Slice> out;
  ObjectWord w = dom;
  for (const auto& s : ps) {
    if (s.pos + s.gen.dom.size() > w.size())
      throw ChainBroken("slice does not fit its stage word");
    ObjectWord l = word_slice(w, 0, s.pos);
    ObjectWord mid = word_slice(w, s.pos, s.pos + s.gen.dom.size());
    ObjectWord r = word_slice(w, s.pos + s.gen.dom.size(), w.size());
    if (mid != s.gen.dom) throw ChainBroken("slice domain does not match stage word");
    out.push_back({l, s.gen, r});
    w = word_concat(word_concat(l, s.gen.cod), r);
  }
  return out;
}

// ---------------------------------------------------------------------
// Canonical arrangement via the wire structure. Every wire of the
// diagram gets an identity; each slice becomes an event consuming and
// producing wires. Events are keyed by isotopy-invariant data: the
// input positions their past depends on, the output positions their
// future reaches, and the generator names along both cones. The
// canonical arrangement realizes the least key-ordered schedule,
// placing wireless creations at the leftmost workable gap. Two diagrams
// are equal exactly when these arrangements coincide.

struct WireEvent {
  MorGen gen;
  std::vector<int> consumed;
  std::vector<int> produced;
};

struct WireDiagram {
  std::vector<WireEvent> events;
  std::vector<int> input_ids;   // 0..m-1
  std::vector<int> output_ids;  // ids surviving to the codomain
};

inline WireDiagram thread_wires(const ObjectWord& dom,
                                const std::vector<PosSlice>& ps) {
  WireDiagram d;
  std::vector<int> word;
  int next = 0;
  for (std::size_t i = 0; i < dom.size(); ++i) word.push_back(next++);
  d.input_ids = word;
  for (const auto& s : ps) {
    WireEvent e;
    e.gen = s.gen;
    for (std::size_t k = 0; k < s.gen.dom.size(); ++k)
      e.consumed.push_back(word[s.pos + k]);
    std::vector<int> nw(word.begin(), word.begin() + static_cast<std::ptrdiff_t>(s.pos));
    for (std::size_t k = 0; k < s.gen.cod.size(); ++k) {
      e.produced.push_back(next);
      nw.push_back(next++);
    }
    nw.insert(nw.end(), word.begin() + static_cast<std::ptrdiff_t>(s.pos + s.gen.dom.size()),
              word.end());
    word = std::move(nw);
    d.events.push_back(std::move(e));
  }
  d.output_ids = word;
  return d;
}

struct EventKey {
  std::vector<int> past_inputs;
  std::vector<int> future_outputs;
  std::string name;
  std::string past_names;
  std::string future_names;

  friend bool operator<(const EventKey& a, const EventKey& b) {
    return std::tie(a.past_inputs, a.future_outputs, a.name, a.past_names,
                    a.future_names) < std::tie(b.past_inputs, b.future_outputs,
                                               b.name, b.past_names,
                                               b.future_names);
  }
  friend bool operator==(const EventKey& a, const EventKey& b) {
    return a.past_inputs == b.past_inputs && a.future_outputs == b.future_outputs &&
           a.name == b.name && a.past_names == b.past_names &&
           a.future_names == b.future_names;
  }
};

inline std::vector<EventKey> event_keys(const WireDiagram& d) {
  const std::size_t n = d.events.size();
  std::map<int, int> producer;  // wire -> producing event
  std::map<int, std::vector<int>> consumers;
  for (std::size_t i = 0; i < n; ++i) {
    for (int w : d.events[i].produced) producer[w] = static_cast<int>(i);
    for (int w : d.events[i].consumed) consumers[w].push_back(static_cast<int>(i));
  }
  std::map<int, int> input_index;
  for (std::size_t i = 0; i < d.input_ids.size(); ++i)
    input_index[d.input_ids[i]] = static_cast<int>(i);
  std::map<int, int> output_index;
  for (std::size_t i = 0; i < d.output_ids.size(); ++i)
    output_index[d.output_ids[i]] = static_cast<int>(i);

  // past closure: events reachable through consumed wires
  std::vector<std::set<int>> past(n), future(n);
  for (std::size_t i = 0; i < n; ++i) {
    // events appear in a valid arrangement order, so producers precede
    for (int w : d.events[i].consumed) {
      auto it = producer.find(w);
      if (it == producer.end()) continue;
      past[i].insert(it->second);
      past[i].insert(past[it->second].begin(), past[it->second].end());
    }
  }
  for (std::size_t ii = n; ii-- > 0;) {
    for (int w : d.events[ii].produced) {
      for (int c : consumers[w]) {
        future[ii].insert(c);
        future[ii].insert(future[c].begin(), future[c].end());
      }
    }
  }

  std::vector<EventKey> keys(n);
  for (std::size_t i = 0; i < n; ++i) {
    EventKey k;
    k.name = d.events[i].gen.name;
    std::set<int> pin, fout;
    std::vector<std::string> pnames, fnames;
    auto absorb_past = [&](std::size_t j) {
      for (int w : d.events[j].consumed) {
        auto it = input_index.find(w);
        if (it != input_index.end()) pin.insert(it->second);
      }
      if (j != i) pnames.push_back(d.events[j].gen.name);
    };
    auto absorb_future = [&](std::size_t j) {
      for (int w : d.events[j].produced) {
        auto it = output_index.find(w);
        if (it != output_index.end()) fout.insert(it->second);
      }
      if (j != i) fnames.push_back(d.events[j].gen.name);
    };
    absorb_past(i);
    absorb_future(i);
    for (int j : past[i]) absorb_past(static_cast<std::size_t>(j));
    for (int j : future[i]) absorb_future(static_cast<std::size_t>(j));
    k.past_inputs.assign(pin.begin(), pin.end());
    k.future_outputs.assign(fout.begin(), fout.end());
    std::sort(pnames.begin(), pnames.end());
    std::sort(fnames.begin(), fnames.end());
    for (const auto& s : pnames) k.past_names += s + ";";
    for (const auto& s : fnames) k.future_names += s + ";";
    keys[i] = std::move(k);
  }
  return keys;
}

// Iterative refinement of event labels through the wire ports, in the
// style of colour refinement: events that differ anywhere in their wired
// neighbourhood eventually get different labels. The labels are computed
// from invariants only, so isomorphic presentations agree on them.
inline std::vector<std::size_t> refined_labels(const WireDiagram& d,
                                               const std::vector<EventKey>& keys) {
  const std::size_t n = d.events.size();
  std::map<int, std::pair<int, int>> producer;  // wire -> (event, port)
  std::map<int, std::vector<std::pair<int, int>>> consumers;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t p = 0; p < d.events[i].produced.size(); ++p)
      producer[d.events[i].produced[p]] = {static_cast<int>(i), static_cast<int>(p)};
    for (std::size_t p = 0; p < d.events[i].consumed.size(); ++p)
      consumers[d.events[i].consumed[p]].push_back(
          {static_cast<int>(i), static_cast<int>(p)});
  }
  std::map<int, int> input_index, output_index;
  for (std::size_t i = 0; i < d.input_ids.size(); ++i)
    input_index[d.input_ids[i]] = static_cast<int>(i);
  for (std::size_t i = 0; i < d.output_ids.size(); ++i)
    output_index[d.output_ids[i]] = static_cast<int>(i);

  std::vector<std::size_t> lab(n);
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t h = std::hash<std::string>{}(keys[i].name);
    h = hash_mix(h, std::hash<std::string>{}(keys[i].past_names));
    h = hash_mix(h, std::hash<std::string>{}(keys[i].future_names));
    for (int x : keys[i].past_inputs) h = hash_mix(h, static_cast<std::size_t>(x) + 1);
    h = hash_mix(h, 0x51ull);
    for (int x : keys[i].future_outputs) h = hash_mix(h, static_cast<std::size_t>(x) + 1);
    lab[i] = h;
  }
  for (std::size_t round = 0; round < n; ++round) {
    std::vector<std::size_t> next(n);
    for (std::size_t i = 0; i < n; ++i) {
      std::size_t h = lab[i];
      for (std::size_t p = 0; p < d.events[i].consumed.size(); ++p) {
        int w = d.events[i].consumed[p];
        auto it = producer.find(w);
        if (it != producer.end()) {
          h = hash_mix(h, lab[static_cast<std::size_t>(it->second.first)]);
          h = hash_mix(h, static_cast<std::size_t>(it->second.second) + 0x1000);
        } else {
          h = hash_mix(h, static_cast<std::size_t>(input_index[w]) + 0x2000);
        }
        h = hash_mix(h, p + 0x3000);
      }
      for (std::size_t p = 0; p < d.events[i].produced.size(); ++p) {
        int w = d.events[i].produced[p];
        auto cit = consumers.find(w);
        if (cit != consumers.end() && !cit->second.empty()) {
          for (auto& [ce, cp] : cit->second) {
            h = hash_mix(h, lab[static_cast<std::size_t>(ce)]);
            h = hash_mix(h, static_cast<std::size_t>(cp) + 0x4000);
          }
        } else {
          h = hash_mix(h, static_cast<std::size_t>(output_index[w]) + 0x5000);
        }
        h = hash_mix(h, p + 0x6000);
      }
      next[i] = h;
    }
    if (next == lab) break;
    lab = std::move(next);
  }
  return lab;
}

struct ConeSpan {
  int lo = -1;  // -1 marks an empty cone
  int hi = -1;
};

struct CanonSearch {
  const WireDiagram& d;
  std::vector<std::size_t> order;  // event indices sorted by key
  std::vector<EventKey> keys;
  std::vector<std::size_t> labels;
  std::set<int> survivors;  // wires that reach the codomain
  std::map<int, ConeSpan> src_span;  // input positions a wire's past reaches
  std::map<int, ConeSpan> dst_span;  // output positions its future reaches
  std::unordered_set<std::size_t> failed;  // memoized dead states
  std::size_t visits = 0;
  std::size_t visit_cap;

  CanonSearch(const WireDiagram& dg, std::size_t cap) : d(dg), visit_cap(cap) {
    keys = event_keys(d);
    labels = refined_labels(d, keys);
    survivors.insert(d.output_ids.begin(), d.output_ids.end());
    order.resize(d.events.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      if (keys[a] == keys[b]) return labels[a] < labels[b];
      return keys[a] < keys[b];
    });
    compute_spans();
  }

  static void widen(ConeSpan& a, const ConeSpan& b) {
    if (b.lo < 0) return;
    if (a.lo < 0) {
      a = b;
      return;
    }
    a.lo = std::min(a.lo, b.lo);
    a.hi = std::max(a.hi, b.hi);
  }

  void compute_spans() {
    for (std::size_t i = 0; i < d.input_ids.size(); ++i)
      src_span[d.input_ids[i]] = {static_cast<int>(i), static_cast<int>(i)};
    for (const auto& ev : d.events) {
      ConeSpan s;
      for (int w : ev.consumed) widen(s, src_span[w]);
      for (int w : ev.produced) src_span[w] = s;
    }
    for (std::size_t i = 0; i < d.output_ids.size(); ++i)
      dst_span[d.output_ids[i]] = {static_cast<int>(i), static_cast<int>(i)};
    for (std::size_t ii = d.events.size(); ii-- > 0;) {
      const auto& ev = d.events[ii];
      ConeSpan s;
      for (int w : ev.produced) widen(s, dst_span[w]);
      for (int w : ev.consumed) dst_span[w] = s;
    }
  }

  // Wires never cross, so both cone spans must be monotone along the
  // word: a wire whose past or future lies further left can never sit
  // to the right of one anchored further right.
  bool spans_monotone(const std::vector<int>& word) const {
    int prev_src_lo = -1, prev_src_hi = -1;
    int prev_dst_lo = -1, prev_dst_hi = -1;
    for (int w : word) {
      auto s = src_span.at(w);
      if (s.lo >= 0) {
        if (s.lo < prev_src_lo || s.hi < prev_src_hi) return false;
        prev_src_lo = s.lo;
        prev_src_hi = s.hi;
      }
      auto t = dst_span.at(w);
      if (t.lo >= 0) {
        if (t.lo < prev_dst_lo || t.hi < prev_dst_hi) return false;
        prev_dst_lo = t.lo;
        prev_dst_hi = t.hi;
      }
    }
    return true;
  }

  std::size_t state_key(const std::vector<int>& word,
                        const std::vector<bool>& done) const {
    std::size_t h = 0xcbf29ce484222325ull;
    for (bool b : done) h = hash_mix(h, b ? 3 : 5);
    for (int w : word) h = hash_mix(h, static_cast<std::size_t>(w) + 11);
    return h;
  }

  // Placed wires never change their relative order, so for each pending
  // event the consumed wires already in the word must occur in
  // consumption order, with no survivor wedged strictly inside the span.
  bool feasible(const std::vector<int>& word, const std::vector<bool>& done) const {
    if (!spans_monotone(word)) return false;
    std::map<int, std::size_t> at;
    for (std::size_t i = 0; i < word.size(); ++i) at[word[i]] = i;
    for (std::size_t e = 0; e < d.events.size(); ++e) {
      if (done[e]) continue;
      const auto& consumed = d.events[e].consumed;
      std::size_t prev = 0, lo = word.size(), hi = 0;
      bool started = false;
      for (int w : consumed) {
        auto it = at.find(w);
        if (it == at.end()) continue;
        if (started && it->second <= prev) return false;
        prev = it->second;
        started = true;
        lo = std::min(lo, it->second);
        hi = std::max(hi, it->second);
      }
      if (!started) continue;
      for (std::size_t p = lo + 1; p < hi; ++p)
        if (survivors.count(word[p])) return false;
    }
    return true;
  }

  // Wires that persist to the codomain may never cross; their relative
  // order in the working word must already match the output word.
  bool output_consistent(const std::vector<int>& word) const {
    std::map<int, std::size_t> rank;
    for (std::size_t i = 0; i < d.output_ids.size(); ++i)
      rank[d.output_ids[i]] = i;
    std::size_t prev = 0;
    bool started = false;
    for (int w : word) {
      auto it = rank.find(w);
      if (it == rank.end()) continue;
      if (started && it->second <= prev) return false;
      prev = it->second;
      started = true;
    }
    return true;
  }

  // Placement window for a wireless creation: the produced block must
  // land between its consumers' already-placed earlier and later wires.
  std::pair<std::size_t, std::size_t> gap_bounds(const std::vector<int>& word,
                                                 std::size_t e) const {
    std::size_t lo = 0, hi = word.size();
    std::map<int, std::size_t> at;
    for (std::size_t i = 0; i < word.size(); ++i) at[word[i]] = i;
    std::map<int, std::pair<std::size_t, std::size_t>> consumer_of;  // wire -> (event, port)
    for (std::size_t i = 0; i < d.events.size(); ++i)
      for (std::size_t p = 0; p < d.events[i].consumed.size(); ++p)
        consumer_of[d.events[i].consumed[p]] = {i, p};
    for (std::size_t p = 0; p < d.events[e].produced.size(); ++p) {
      auto it = consumer_of.find(d.events[e].produced[p]);
      if (it == consumer_of.end()) continue;
      const auto& [ce, port] = it->second;
      const auto& cons = d.events[ce].consumed;
      for (std::size_t q = 0; q < cons.size(); ++q) {
        auto wit = at.find(cons[q]);
        if (wit == at.end()) continue;
        if (q < port)
          lo = std::max(lo, wit->second + 1);
        else if (q > port)
          hi = std::min(hi, wit->second);
      }
    }
    return {lo, hi};
  }

  // Depth-first realization in key order; the first completed schedule
  // is the canonical arrangement.
  bool run(std::vector<int>& word, std::vector<bool>& done, std::size_t left,
           std::vector<PosSlice>& out) {
    if (++visits > visit_cap)
      throw Error("canonicalize: realization search exceeded its cap");
    if (left == 0) return word == d.output_ids;
    if (!feasible(word, done)) return false;
    std::size_t memo = state_key(word, done);
    if (failed.count(memo)) return false;
    std::set<int> pending_producers;
    for (std::size_t i = 0; i < d.events.size(); ++i)
      if (!done[i])
        for (int w : d.events[i].produced) pending_producers.insert(w);

    // Ready events in key order; automorphic twins (equal key and label)
    // are tried leftmost placement first, which keeps the choice
    // independent of how the diagram was presented.
    struct Cand {
      std::size_t e;
      std::size_t pos;
    };
    std::vector<Cand> cands;
    for (std::size_t oi = 0; oi < order.size(); ++oi) {
      std::size_t e = order[oi];
      if (done[e]) continue;
      const WireEvent& ev = d.events[e];
      bool ready = true;
      for (int w : ev.consumed)
        if (pending_producers.count(w)) {
          ready = false;
          break;
        }
      if (!ready) continue;
      std::size_t pos = 0;
      if (!ev.consumed.empty()) {
        auto it = std::search(word.begin(), word.end(), ev.consumed.begin(),
                              ev.consumed.end());
        if (it == word.end()) continue;  // not contiguous yet
        pos = static_cast<std::size_t>(it - word.begin());
      }
      cands.push_back({e, pos});
    }
    std::stable_sort(cands.begin(), cands.end(), [&](const Cand& a, const Cand& b) {
      if (!(keys[a.e] == keys[b.e])) return keys[a.e] < keys[b.e];
      if (labels[a.e] != labels[b.e]) return labels[a.e] < labels[b.e];
      return a.pos < b.pos;
    });

    for (const Cand& c : cands) {
      const WireEvent& ev = d.events[c.e];
      if (!ev.consumed.empty()) {
        std::vector<int> save = word;
        word.erase(word.begin() + static_cast<std::ptrdiff_t>(c.pos),
                   word.begin() + static_cast<std::ptrdiff_t>(c.pos + ev.consumed.size()));
        word.insert(word.begin() + static_cast<std::ptrdiff_t>(c.pos),
                    ev.produced.begin(), ev.produced.end());
        done[c.e] = true;
        out.push_back({ev.gen, c.pos});
        if (run(word, done, left - 1, out)) return true;
        out.pop_back();
        done[c.e] = false;
        word = std::move(save);
      } else {
        auto [glo, ghi] = gap_bounds(word, c.e);
        for (std::size_t gap = glo; gap <= ghi && gap <= word.size(); ++gap) {
          std::vector<int> save = word;
          word.insert(word.begin() + static_cast<std::ptrdiff_t>(gap),
                      ev.produced.begin(), ev.produced.end());
          done[c.e] = true;
          out.push_back({ev.gen, gap});
          if (spans_monotone(word) && run(word, done, left - 1, out)) return true;
          out.pop_back();
          done[c.e] = false;
          word = std::move(save);
        }
      }
    }
    failed.insert(memo);
    return false;
  }
};

inline std::vector<PosSlice> canonical_core(const ObjectWord& dom,
                                            const std::vector<PosSlice>& ps,
                                            std::size_t visit_cap) {
  if (ps.size() <= 1) return ps;
  WireDiagram d = thread_wires(dom, ps);
  CanonSearch search(d, visit_cap);
  std::vector<int> word = d.input_ids;
  std::vector<bool> done(d.events.size(), false);
  std::vector<PosSlice> out;
  if (!search.run(word, done, d.events.size(), out))
    throw Error("canonicalize: no realizable schedule");
  return out;
}

// Canonical arrangement with closed components set aside first. A
// wire-connected component that touches neither the domain nor the
// codomain can slide past everything except the pass-through wires, so
// its class data is just its own canonical arrangement plus the index
// of the persistent gap it lives in. Extracting them first also keeps
// the schedule search away from their interleavings.
inline std::vector<PosSlice> canonical_list(const ObjectWord& dom,
                                            const std::vector<PosSlice>& ps,
                                            std::size_t visit_cap = 2000000) {
  if (ps.size() <= 1) return ps;
  WireDiagram d = thread_wires(dom, ps);
  const std::size_t n = d.events.size();

  // union-find over events sharing wires
  std::vector<std::size_t> parent(n);
  for (std::size_t i = 0; i < n; ++i) parent[i] = i;
  std::function<std::size_t(std::size_t)> find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  std::map<int, std::size_t> touch;
  for (std::size_t i = 0; i < n; ++i) {
    for (int w : d.events[i].consumed) {
      auto it = touch.find(w);
      if (it != touch.end()) parent[find(i)] = find(it->second);
      touch[w] = i;
    }
    for (int w : d.events[i].produced) {
      auto it = touch.find(w);
      if (it != touch.end()) parent[find(i)] = find(it->second);
      touch[w] = i;
    }
  }

  std::set<int> inputs(d.input_ids.begin(), d.input_ids.end());
  std::set<int> outputs(d.output_ids.begin(), d.output_ids.end());
  std::map<std::size_t, bool> closed;
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t r = find(i);
    if (!closed.count(r)) closed[r] = true;
    for (int w : d.events[i].consumed)
      if (inputs.count(w)) closed[r] = false;
    for (int w : d.events[i].produced)
      if (outputs.count(w)) closed[r] = false;
  }
  std::size_t closed_count = 0;
  for (auto& [r, c] : closed)
    if (c) ++closed_count;

  // persistent barriers: input wires that survive to the codomain
  std::vector<int> persistent;
  for (int w : d.input_ids)
    if (outputs.count(w)) persistent.push_back(w);

  // With no closed component the schedule search records everything;
  // a single closed component with no barriers is its own base case.
  if (closed_count == 0 ||
      (closed.size() == 1 && closed_count == 1 && persistent.empty()))
    return canonical_core(dom, ps, visit_cap);

  // walk the arrangement, splitting slices into core and bubbles with
  // positions filtered to the wires their own part keeps
  std::map<int, std::size_t> wire_comp;  // produced wire -> component root
  std::set<int> bubble_wires;
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t r = find(i);
    for (int w : d.events[i].produced) {
      wire_comp[w] = r;
      if (closed[r]) bubble_wires.insert(w);
    }
  }

  struct Bubble {
    std::vector<PosSlice> slices;
    std::size_t gap = 0;
    bool placed = false;
  };
  std::map<std::size_t, Bubble> bubbles;
  std::vector<PosSlice> core;
  std::vector<int> word = d.input_ids;
  for (std::size_t i = 0; i < n; ++i) {
    const WireEvent& ev = d.events[i];
    std::size_t pos = 0;
    if (!ev.consumed.empty()) {
      auto it = std::search(word.begin(), word.end(), ev.consumed.begin(),
                            ev.consumed.end());
      pos = static_cast<std::size_t>(it - word.begin());
    } else {
      pos = ps[i].pos;
    }
    std::size_t r = find(i);
    if (closed[r]) {
      Bubble& b = bubbles[r];
      if (!b.placed) {
        b.placed = true;
        std::size_t g = 0;
        for (std::size_t k = 0; k < pos; ++k)
          if (outputs.count(word[k]) && inputs.count(word[k])) ++g;
        b.gap = g;
      }
      // positions inside a bubble count only that bubble's own wires
      std::size_t own = 0;
      for (std::size_t k = 0; k < pos; ++k) {
        auto it = wire_comp.find(word[k]);
        if (it != wire_comp.end() && it->second == r) ++own;
      }
      b.slices.push_back({ev.gen, own});
    } else {
      std::size_t fp = 0;
      for (std::size_t k = 0; k < pos; ++k)
        if (!bubble_wires.count(word[k])) ++fp;
      core.push_back({ev.gen, fp});
    }
    // update word
    std::vector<int> nw(word.begin(), word.begin() + static_cast<std::ptrdiff_t>(pos));
    nw.insert(nw.end(), ev.produced.begin(), ev.produced.end());
    nw.insert(nw.end(),
              word.begin() + static_cast<std::ptrdiff_t>(pos + ev.consumed.size()),
              word.end());
    word = std::move(nw);
  }

  std::vector<PosSlice> core_canon = canonical_list(dom, core, visit_cap);

  struct PlacedBubble {
    std::size_t gap;
    std::vector<PosSlice> canon;
  };
  std::vector<PlacedBubble> placed;
  for (auto& [r, b] : bubbles)
    placed.push_back({b.gap, canonical_list({}, b.slices, visit_cap)});
  auto bkey = [](const std::vector<PosSlice>& v) {
    std::vector<std::pair<std::size_t, std::string>> ks;
    for (const auto& s : v) ks.push_back({s.pos, s.gen.name});
    return ks;
  };
  std::sort(placed.begin(), placed.end(), [&](const PlacedBubble& a,
                                              const PlacedBubble& b) {
    if (a.gap != b.gap) return a.gap < b.gap;
    return bkey(a.canon) < bkey(b.canon);
  });

  // absolute anchor of gap g: leftmost input position right of the
  // (g-1)-th persistent wire
  std::map<int, std::size_t> input_pos;
  for (std::size_t i = 0; i < d.input_ids.size(); ++i)
    input_pos[d.input_ids[i]] = i;
  auto gap_anchor = [&](std::size_t g) -> std::size_t {
    if (g == 0) return 0;
    return input_pos[persistent[g - 1]] + 1;
  };

  std::vector<PosSlice> out;
  for (const auto& b : placed)
    for (const auto& s : b.canon)
      out.push_back({s.gen, s.pos + gap_anchor(b.gap)});
  for (const auto& s : core_canon) out.push_back(s);
  return out;
}

inline std::vector<PosSlice> positions(const BaseMor& f) {
  std::vector<PosSlice> ps;
  ps.reserve(f.slices.size());
  for (const auto& s : f.slices) ps.push_back({s.gen, s.left.size()});
  return ps;
}

// Adjacent slices commute when the later one's input block does not meet
// the earlier one's output block; both placements are valid when a
// no-input slice touches a no-output slice.
inline bool commutes_left(const PosSlice& s, const PosSlice& t) {
  return t.pos + t.gen.dom.size() <= s.pos;
}

inline bool commutes_right(const PosSlice& s, const PosSlice& t) {
  return t.pos >= s.pos + s.gen.cod.size();
}

inline std::pair<PosSlice, PosSlice> swap_left(const PosSlice& s, const PosSlice& t) {
  return {t, PosSlice{s.gen, s.pos + t.gen.cod.size() - t.gen.dom.size()}};
}

inline std::pair<PosSlice, PosSlice> swap_right(const PosSlice& s, const PosSlice& t) {
  return {PosSlice{t.gen, t.pos - s.gen.cod.size() + s.gen.dom.size()},
          PosSlice{s.gen, s.pos}};
}

}  // namespace detail

inline BaseMor canonicalize(std::vector<Slice> raw, ObjectWord dom) {
  // Validate chaining before touching anything.
  ObjectWord w = dom;
  std::vector<detail::PosSlice> ps;
  for (const auto& s : raw) {
    if (slice_in(s) != w) throw ChainBroken("slice boundary does not chain");
    ps.push_back({s.gen, s.left.size()});
    w = slice_out(s);
  }
  ps = detail::canonical_list(dom, ps);
  return BaseMor{dom, detail::replay(dom, ps)};
}

inline BaseMor mor_id(ObjectWord w) { return BaseMor{std::move(w), {}}; }

inline BaseMor mor_gen(const MorGen& g) {
  return BaseMor{g.dom, {Slice{{}, g, {}}}};
}

inline BaseMor mor_comp(const BaseMor& f, const BaseMor& g) {
  if (base_cod(f) != g.dom)
    throw BoundaryMismatch("compose: cod(" + word_str(base_cod(f)) + ") vs dom(" +
                           word_str(g.dom) + ")");
  std::vector<Slice> all = f.slices;
  all.insert(all.end(), g.slices.begin(), g.slices.end());
  return canonicalize(std::move(all), f.dom);
}

inline BaseMor mor_tensor(const BaseMor& f, const BaseMor& g) {
  std::vector<Slice> all;
  for (const auto& s : f.slices)
    all.push_back({s.left, s.gen, word_concat(s.right, g.dom)});
  ObjectWord fc = base_cod(f);
  for (const auto& s : g.slices)
    all.push_back({word_concat(fc, s.left), s.gen, s.right});
  return canonicalize(std::move(all), word_concat(f.dom, g.dom));
}

inline bool base_eq(const BaseMor& f, const BaseMor& g) { return f == g; }

// All ways of writing f as f0 ; f1, indexed by the slice split point.
inline std::vector<std::pair<BaseMor, BaseMor>> seq_splits(const BaseMor& f) {
  std::vector<std::pair<BaseMor, BaseMor>> out;
  for (std::size_t k = 0; k <= f.slices.size(); ++k) {
    std::vector<Slice> a(f.slices.begin(), f.slices.begin() + static_cast<std::ptrdiff_t>(k));
    std::vector<Slice> b(f.slices.begin() + static_cast<std::ptrdiff_t>(k), f.slices.end());
    ObjectWord mid = k == 0 ? f.dom : slice_out(f.slices[k - 1]);
    out.push_back({canonicalize(std::move(a), f.dom), canonicalize(std::move(b), mid)});
  }
  return out;
}

inline std::pair<BaseMor, BaseMor> seq_split_at(const BaseMor& f, std::size_t k) {
  if (k > f.slices.size()) throw InvalidPosition("seq split out of range");
  std::vector<Slice> a(f.slices.begin(), f.slices.begin() + static_cast<std::ptrdiff_t>(k));
  std::vector<Slice> b(f.slices.begin() + static_cast<std::ptrdiff_t>(k), f.slices.end());
  ObjectWord mid = k == 0 ? f.dom : slice_out(f.slices[k - 1]);
  return {canonicalize(std::move(a), f.dom), canonicalize(std::move(b), mid)};
}

// Writes f as f0 (x) f1 with |dom f0| = k, when the slices separate
// cleanly at that boundary.
inline std::optional<std::pair<BaseMor, BaseMor>> tensor_split_at(const BaseMor& f,
                                                                  std::size_t k) {
  if (k > f.dom.size()) return std::nullopt;
  std::size_t boundary = k;
  std::vector<detail::PosSlice> ls, rs;
  for (const auto& s : f.slices) {
    std::size_t pos = s.left.size();
    std::size_t d = s.gen.dom.size();
    if (pos + d <= boundary) {
      ls.push_back({s.gen, pos});
      boundary += s.gen.cod.size() - d;
    } else if (pos >= boundary) {
      rs.push_back({s.gen, pos - boundary});
    } else {
      return std::nullopt;
    }
  }
  ObjectWord d0 = word_slice(f.dom, 0, k);
  ObjectWord d1 = word_slice(f.dom, k, f.dom.size());
  BaseMor f0{d0, detail::replay(d0, ls)};
  BaseMor f1{d1, detail::replay(d1, rs)};
  return std::make_pair(canonicalize(f0.slices, d0), canonicalize(f1.slices, d1));
}

inline std::vector<std::tuple<std::size_t, BaseMor, BaseMor>> tensor_splits(
    const BaseMor& f) {
  std::vector<std::tuple<std::size_t, BaseMor, BaseMor>> out;
  for (std::size_t k = 0; k <= f.dom.size(); ++k)
    if (auto s = tensor_split_at(f, k)) out.push_back({k, s->first, s->second});
  return out;
}

// A user rewrite rule on base morphisms, applied under any monoidal
// context. measure_drop feeds the termination measure when present.
struct BaseRule {
  std::string name;
  BaseMor lhs;
  BaseMor rhs;
  std::optional<std::size_t> measure_drop;
};

inline void check_rule(const BaseRule& r) {
  if (r.lhs.dom != r.rhs.dom || base_cod(r.lhs) != base_cod(r.rhs))
    throw BoundaryMismatch("rule " + r.name + ": sides have different boundaries");
}

struct BaseRwConfig {
  std::size_t max_slices = 64;
  std::size_t max_arrangements = 4096;
};

namespace detail {

// Strips identity wires shared by every stage of f from both edges.
// Returns the padding removed and the stripped core.
struct Trimmed {
  std::size_t left = 0;
  std::size_t right = 0;
  BaseMor core;
};

inline Trimmed trim(const BaseMor& f) {
  ObjectWord cod = base_cod(f);
  std::size_t lp = std::min(f.dom.size(), cod.size());
  std::size_t rp = std::min(f.dom.size(), cod.size());
  for (std::size_t i = 0; i < lp; ++i)
    if (f.dom[i] != cod[i]) { lp = i; break; }
  for (std::size_t i = 0; i < rp; ++i)
    if (f.dom[f.dom.size() - 1 - i] != cod[cod.size() - 1 - i]) { rp = i; break; }
  for (const auto& s : f.slices) {
    lp = std::min(lp, s.left.size());
    rp = std::min(rp, s.right.size());
  }
  if (lp + rp > f.dom.size()) rp = f.dom.size() - lp;
  std::vector<PosSlice> ps;
  for (const auto& s : f.slices) ps.push_back({s.gen, s.left.size() - lp});
  ObjectWord d = word_slice(f.dom, lp, f.dom.size() - rp);
  return {lp, rp, BaseMor{d, replay(d, ps)}};
}

inline std::vector<std::vector<Slice>> arrangements(const BaseMor& f,
                                                    std::size_t cap) {
  std::vector<std::vector<Slice>> out;
  std::set<std::size_t> seen;
  std::deque<std::pair<ObjectWord, std::vector<PosSlice>>> queue;
  queue.push_back({f.dom, positions(f)});
  auto key = [&](const std::vector<PosSlice>& ps) {
    std::size_t h = 0xcbf29ce484222325ull;
    for (const auto& s : ps) {
      h = hash_mix(h, std::hash<std::string>{}(s.gen.name));
      h = hash_mix(h, s.pos);
    }
    return h;
  };
  seen.insert(key(queue.front().second));
  while (!queue.empty() && out.size() < cap) {
    auto [dom, ps] = queue.front();
    queue.pop_front();
    out.push_back(replay(dom, ps));
    for (std::size_t i = 0; i + 1 < ps.size(); ++i) {
      const PosSlice& s = ps[i];
      const PosSlice& t = ps[i + 1];
      std::vector<std::pair<PosSlice, PosSlice>> sws;
      if (commutes_left(s, t)) sws.push_back(swap_left(s, t));
      if (commutes_right(s, t)) sws.push_back(swap_right(s, t));
      for (const auto& sw : sws) {
        auto next = ps;
        next[i] = sw.first;
        next[i + 1] = sw.second;
        if (seen.insert(key(next)).second) queue.push_back({dom, next});
      }
    }
  }
  return out;
}

}  // namespace detail

namespace detail {

// A rule with the identity padding common to both sides stripped, so
// occurrences are matched against the minimal core.
struct PreparedRule {
  const BaseRule* rule = nullptr;
  BaseMor lhs;
  BaseMor rhs;
};

inline BaseMor strip(const BaseMor& f, std::size_t lp, std::size_t rp) {
  std::vector<PosSlice> ps;
  for (const auto& s : f.slices) ps.push_back({s.gen, s.left.size() - lp});
  ObjectWord d = word_slice(f.dom, lp, f.dom.size() - rp);
  return canonicalize(replay(d, ps), d);
}

inline PreparedRule prepare_rule(const BaseRule& r) {
  Trimmed a = trim(r.lhs);
  Trimmed b = trim(r.rhs);
  std::size_t lp = std::min(a.left, b.left);
  std::size_t rp = std::min(a.right, b.right);
  return {&r, strip(r.lhs, lp, rp), strip(r.rhs, lp, rp)};
}

}  // namespace detail

// All single applications of the rules to f under monoidal contexts:
// every contiguous window of every interchange arrangement is matched
// against each rule up to identity padding. Complete up to the
// configured caps.
inline std::vector<std::pair<const BaseRule*, BaseMor>> enumerate_base_rewrites(
    const BaseMor& f, const std::vector<BaseRule>& rules,
    const BaseRwConfig& cfg = {}) {
  std::vector<std::pair<const BaseRule*, BaseMor>> out;
  if (rules.empty()) return out;
  if (f.slices.size() > cfg.max_slices) return out;
  std::set<std::pair<const BaseRule*, std::size_t>> seen;

  std::vector<detail::PreparedRule> prepared;
  for (const auto& r : rules) prepared.push_back(detail::prepare_rule(r));

  auto replace_window = [&](const std::vector<Slice>& arr, std::size_t i,
                            std::size_t k, const ObjectWord& w0, std::size_t lo,
                            std::size_t ro, const detail::PreparedRule& pr) {
    std::vector<Slice> result(arr.begin(), arr.begin() + static_cast<std::ptrdiff_t>(i));
    ObjectWord lpad = word_slice(w0, 0, lo);
    ObjectWord rpad = word_slice(w0, w0.size() - ro, w0.size());
    for (const auto& s : pr.rhs.slices)
      result.push_back({word_concat(lpad, s.left), s.gen, word_concat(s.right, rpad)});
    for (std::size_t j = i + k; j < arr.size(); ++j) result.push_back(arr[j]);
    BaseMor full = canonicalize(std::move(result), f.dom);
    if (seen.insert({pr.rule, base_hash(full)}).second) out.push_back({pr.rule, full});
  };

  for (const auto& arr : detail::arrangements(f, cfg.max_arrangements)) {
    std::vector<ObjectWord> words;
    words.push_back(f.dom);
    for (const auto& s : arr) words.push_back(slice_out(s));

    for (const auto& pr : prepared) {
      const std::size_t k = pr.lhs.slices.size();
      if (k > arr.size()) continue;
      if (k == 0) {
        // Identity left-hand side: match its domain as a subword of any
        // stage. Only the initial stage is needed: later stages are
        // covered by the window positions of other arrangements.
        const ObjectWord& pat = pr.lhs.dom;
        for (std::size_t i = 0; i + k <= arr.size(); ++i) {
          const ObjectWord& w0 = words[i];
          for (std::size_t off = 0; off + pat.size() <= w0.size(); ++off) {
            if (!std::equal(pat.begin(), pat.end(),
                            w0.begin() + static_cast<std::ptrdiff_t>(off)))
              continue;
            replace_window(arr, i, 0, w0, off, w0.size() - off - pat.size(), pr);
          }
        }
        continue;
      }
      for (std::size_t i = 0; i + k <= arr.size(); ++i) {
        const ObjectWord& w0 = words[i];
        std::size_t lo = w0.size(), ro = w0.size();
        for (std::size_t j = 0; j < k; ++j) {
          lo = std::min(lo, arr[i + j].left.size());
          ro = std::min(ro, arr[i + j].right.size());
        }
        std::vector<detail::PosSlice> ps;
        for (std::size_t j = 0; j < k; ++j)
          ps.push_back({arr[i + j].gen, arr[i + j].left.size() - lo});
        ObjectWord d = word_slice(w0, lo, w0.size() - ro);
        BaseMor m;
        try {
          m = canonicalize(detail::replay(d, ps), d);
        } catch (const ChainBroken&) {
          continue;
        }
        if (!base_eq(m, pr.lhs)) continue;
        replace_window(arr, i, k, w0, lo, ro, pr);
      }
    }
  }
  return out;
}

// Total measure drop along the deterministic greedy reduction of f to a
// rule normal form; meaningful when the rule system is terminating.
inline std::size_t base_measure(const BaseMor& f, const std::vector<BaseRule>& rules,
                                const BaseRwConfig& cfg = {},
                                std::size_t step_budget = 4096) {
  BaseMor cur = f;
  std::size_t total = 0;
  for (std::size_t step = 0; step < step_budget; ++step) {
    auto moves = enumerate_base_rewrites(cur, rules, cfg);
    if (moves.empty()) return total;
    std::sort(moves.begin(), moves.end(), [](const auto& a, const auto& b) {
      if (a.first->name != b.first->name) return a.first->name < b.first->name;
      return base_hash(a.second) < base_hash(b.second);
    });
    total += moves.front().first->measure_drop.value_or(1);
    cur = moves.front().second;
  }
  throw StepBudgetExceeded("base_measure: rule system did not terminate in budget");
}

inline std::string base_str(const BaseMor& f) {
  if (f.slices.empty()) return "1@" + (f.dom.empty() ? std::string("I") : word_str(f.dom));
  std::string out;
  for (std::size_t i = 0; i < f.slices.size(); ++i) {
    const Slice& s = f.slices[i];
    if (i) out += " ; ";
    bool tens = !s.left.empty() || !s.right.empty();
    std::string part;
    if (!s.left.empty()) part += "1@" + word_str_parens(s.left) + " * ";
    part += s.gen.name;
    if (!s.right.empty()) part += " * 1@" + word_str_parens(s.right);
    out += tens && f.slices.size() > 1 ? "(" + part + ")" : part;
  }
  return out;
}

}  // namespace cornering
