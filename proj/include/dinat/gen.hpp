#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string>

#include "dinat/finsem.hpp"
#include "dinat/model.hpp"

namespace dinat {

using Rng = std::mt19937_64;

FinCat walking_arrow();
FinCat discrete_category(int n);
FinCat chain3();          // a -> b -> c with the composite
FinCat idempotent_monoid();  // one object o, s;s = s
FinCat parallel_pair();   // f, g : a -> b
FinCat empty_category();
// One of the shapes above, or a random poset on up to 3 objects, or a random
// monoid with up to 3 elements.
FinCat random_category(Rng& rng);

// Random set-valued functor with sets of size <= max_size. Generators are
// given random actions and closed under composition; conflicting attempts are
// retried. Falls back to a constant functor.
SetFunctor random_functor(const FinCat& c, Rng& rng, int max_size, int tries = 200);
SetFunctor constant_functor(const FinCat& c, int n);
// hom on c^op * c; elements are morphism names.
SetFunctor hom_functor(const FinCat& c);
// External product on a * b (pairs of elements).
SetFunctor functor_product(const FinCat& a, const SetFunctor& f, const FinCat& b, const SetFunctor& g);

// Two dinaturals whose pointwise composite fails the hexagon.
struct CompositionWitness {
  std::uint64_t seed = 0;
  int model_index = 0;
  Model model;
  DinatFamily alpha, beta;
  HexagonFailure failure;
};

struct CompositionSearchStats {
  int models = 0;
  long pairs = 0;
};

// Scans `models` random models derived from `seed` (walking-arrow-sized
// categories, dipresheaves P, Q, R on C^op * C) for dinaturals
// alpha: P -> Q and beta: Q -> R whose composite is not dinatural.
std::optional<CompositionWitness> search_composition_failure(std::uint64_t seed, int models,
                                                             CompositionSearchStats* stats = nullptr);

std::string witness_to_json(const CompositionWitness& w);
CompositionWitness witness_from_json(const std::string& text);

}  // namespace dinat
