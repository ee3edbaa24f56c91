#pragma once

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "dinat/syntax.hpp"
#include "dinat/value.hpp"

namespace dinat {

struct Morphism {
  Value name;
  int src, dst;
};

// Finite category given by its full composition table. Composition is
// diagrammatic: compose(f, g) is "f then g".
struct FinCat {
  Elems objects;
  std::vector<Morphism> mors;
  std::vector<int> identity;  // per object

  int nobj() const { return static_cast<int>(objects.size()); }
  int nmor() const { return static_cast<int>(mors.size()); }
  int compose(int f, int g) const { return comp_[static_cast<size_t>(f) * mors.size() + g]; }
  const FinSet& hom(int a, int b) const { return homsets_[static_cast<size_t>(a) * objects.size() + b]; }
  const std::vector<int>& hom_mors(int a, int b) const { return hom_ix_[static_cast<size_t>(a) * objects.size() + b]; }
  int obj_index(const Value& v) const;
  int mor_index(const Value& v) const;
  bool is_identity(int m) const { return identity[mors[m].src] == m; }

  void set_compose(int f, int g, int h) { comp_[static_cast<size_t>(f) * mors.size() + g] = h; }
  // Sizes the tables; compositions start undefined.
  void reset_tables();
  // Builds hom sets and lookup indices; call after the table is complete.
  void finalize();
  // Exhaustive check of totality, units and associativity; throws ModelError
  // naming the offending morphisms.
  void validate(const std::string& name) const;

 private:
  std::vector<int> comp_;
  std::vector<FinSet> homsets_;
  std::vector<std::vector<int>> hom_ix_;
  std::map<Value, int> obj_ix_, mor_ix_;
};

struct MorSpec {
  std::string name, src, dst;
};
struct CompSpec {
  std::string first, second, result;
};

// Identities are named id_<obj> unless given. Only non-identity morphisms and
// their composites need to be listed.
FinCat make_category(const std::vector<std::string>& objects, const std::vector<MorSpec>& mors,
                     const std::vector<CompSpec>& comps, const std::string& name,
                     const std::map<std::string, std::string>& identities = {});
FinCat opposite(const FinCat& c);
FinCat product(const FinCat& a, const FinCat& b);
FinCat unit_category();

// Set-valued functor on a finite category: a set per object and a map per
// morphism (element index to element index).
struct SetFunctor {
  std::vector<FinSet> sets;
  std::vector<std::vector<int>> maps;
};
void validate_functor(const FinCat& c, const SetFunctor& f, const std::string& name);

// Interpretation of an atom: a covariant functor on the product of its slot
// categories, contravariant slots taken opposite.
struct AtomTable {
  std::vector<Slot> slots;
  SetFunctor fun;
};

struct FunctorTable {
  Cat dom, cod;
  std::vector<int> obj, mor;
};

class Model {
 public:
  std::string name;
  std::map<std::string, FinCat> bases;
  std::map<std::string, AtomTable> atoms;
  std::map<std::string, FunctorTable> functors;

  // Finite category denoted by a category expression (cached).
  const FinCat& cat(const Cat& c) const;
  // Category on which an atom's functor lives.
  const FinCat& slot_product(const std::vector<Slot>& slots) const;

  // Checks every category, atom and functor; throws ModelError.
  void validate() const;
  // Interpretations required by a signature are present and match it.
  void check_covers(const Signature& sig) const;
  void clear_cache() const { cache_.clear(); }

 private:
  mutable std::map<std::string, std::shared_ptr<FinCat>> cache_;
};

Cat slot_cat(const Slot& s);  // the slot category, opposite if contravariant

}  // namespace dinat
