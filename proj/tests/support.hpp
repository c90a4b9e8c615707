#pragma once

#include <random>

#include "cornering/base.hpp"
#include "cornering/signature.hpp"

namespace cornering::testing {

// The bread-making example signature with its two rewrite rules.
inline Signature bakery_sig() {
  Signature s;
  s.add_object("Ingr");
  s.add_object("Food");
  s.add_morphism("water", {}, {"Ingr"});
  s.add_morphism("flour", {}, {"Ingr"});
  s.add_morphism("bread", {}, {"Food"});
  s.add_morphism("mix", {"Ingr", "Ingr"}, {"Ingr"});
  s.add_morphism("bake", {"Ingr"}, {"Food"});
  s.add_morphism("eat", {"Food"}, {});
  return s;
}

inline BaseMor gen_of(const Signature& s, const std::string& name) {
  const MorGen* g = s.find_morphism(name);
  if (!g) throw UnknownGenerator(name);
  return mor_gen(*g);
}

inline std::vector<BaseRule> bakery_rules() {
  Signature s = bakery_sig();
  BaseMor lhs1 = mor_comp(mor_comp(mor_tensor(gen_of(s, "water"), gen_of(s, "flour")),
                                   gen_of(s, "mix")),
                          gen_of(s, "bake"));
  BaseMor rhs1 = gen_of(s, "bread");
  BaseMor lhs2 = mor_comp(gen_of(s, "bread"), gen_of(s, "eat"));
  BaseMor rhs2 = mor_id({});
  return {{"make_bread", lhs1, rhs1, 3}, {"eat_bread", lhs2, rhs2, 2}};
}

// The vending-machine example signature.
inline Signature vending_sig() {
  Signature s;
  s.add_object("Gum");
  s.add_object("Cig");
  s.add_object("$1");
  s.add_object("$2");
  s.add_morphism("c", {"$2"}, {"Cig"});
  s.add_morphism("g", {"$1"}, {"Gum"});
  s.add_morphism("g'", {"$2"}, {"Gum", "$1"});
  return s;
}

// Two objects with producers and consumers for both: every object word
// is reachable from every other, so generation never gets stuck.
inline Signature fourgen_sig() {
  Signature s;
  s.add_object("A");
  s.add_object("B");
  s.add_morphism("mkA", {}, {"A"});
  s.add_morphism("rmA", {"A"}, {});
  s.add_morphism("mkB", {}, {"B"});
  s.add_morphism("rmB", {"B"}, {});
  return s;
}

// Two objects, two converters; used by the exhaustive coherence check.
inline Signature twogen_sig() {
  Signature s;
  s.add_object("A");
  s.add_object("B");
  s.add_morphism("f", {"A"}, {"B"});
  s.add_morphism("g", {"B"}, {"A"});
  return s;
}

// Random morphism over a signature: a chain of whiskered generators.
inline BaseMor random_mor(const Signature& s, std::mt19937_64& rng,
                          std::size_t max_slices = 5, std::size_t max_pad = 2) {
  ObjectWord dom;
  std::size_t pad = rng() % (max_pad + 1);
  for (std::size_t i = 0; i < pad; ++i)
    dom.push_back(s.objects[rng() % s.objects.size()].name);
  std::vector<Slice> slices;
  ObjectWord w = dom;
  std::size_t n = rng() % (max_slices + 1);
  for (std::size_t i = 0; i < n; ++i) {
    // choose a generator that fits somewhere in w, with retries
    bool placed = false;
    for (int attempt = 0; attempt < 8 && !placed; ++attempt) {
      const MorGen& g = s.morphisms[rng() % s.morphisms.size()];
      if (g.dom.size() > w.size() && !g.dom.empty()) continue;
      std::vector<std::size_t> fits;
      for (std::size_t pos = 0; pos + g.dom.size() <= w.size(); ++pos)
        if (std::equal(g.dom.begin(), g.dom.end(),
                       w.begin() + static_cast<std::ptrdiff_t>(pos)))
          fits.push_back(pos);
      if (fits.empty()) continue;
      std::size_t pos = fits[rng() % fits.size()];
      Slice sl{word_slice(w, 0, pos), g, word_slice(w, pos + g.dom.size(), w.size())};
      w = slice_out(sl);
      slices.push_back(sl);
      placed = true;
    }
  }
  return canonicalize(slices, dom);
}

}  // namespace cornering::testing
