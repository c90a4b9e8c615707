#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "cornering/errors.hpp"
#include "cornering/word.hpp"

namespace cornering {

struct ObjGen {
  std::string name;
};

struct MorGen {
  std::string name;
  ObjectWord dom;
  ObjectWord cod;

  friend bool operator==(const MorGen& a, const MorGen& b) {
    return a.name == b.name && a.dom == b.dom && a.cod == b.cod;
  }
};

// Generating objects and morphisms of the free base category. Names are
// unique within a signature.
struct Signature {
  std::vector<ObjGen> objects;
  std::vector<MorGen> morphisms;

  bool has_object(const std::string& name) const {
    for (const auto& o : objects)
      if (o.name == name) return true;
    return false;
  }

  const MorGen* find_morphism(const std::string& name) const {
    for (const auto& m : morphisms)
      if (m.name == name) return &m;
    return nullptr;
  }

  void add_object(std::string name) {
    if (has_object(name)) throw Error("duplicate object: " + name);
    objects.push_back({std::move(name)});
  }

  void add_morphism(std::string name, ObjectWord dom, ObjectWord cod) {
    if (find_morphism(name)) throw Error("duplicate morphism: " + name);
    check_word(dom);
    check_word(cod);
    morphisms.push_back({std::move(name), std::move(dom), std::move(cod)});
  }

  void check_word(const ObjectWord& w) const {
    for (const auto& x : w)
      if (!has_object(x)) throw UnknownGenerator("unknown object: " + x);
  }
};

}  // namespace cornering
