#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "dinat/kernel.hpp"
#include "dinat/model.hpp"
#include "dinat/value.hpp"

namespace dinat {

// Guard on the size of any materialized set. Defaults to 10^6, or to the
// value of DINAT_MAX_SET_SIZE when set.
size_t max_set_size();
void set_max_set_size(size_t n);

// A point assigns each variable a (contravariant, covariant) object pair; a
// morphism between points assigns (neg: B- -> A-, pos: A+ -> B+).
using Point = std::vector<std::pair<int, int>>;
using MorPoint = std::vector<std::pair<int, int>>;

Point diagonal(const std::vector<int>& objs);

// Packs a list of values the way `pack` nests conjunctions.
Value pack_value(const std::vector<Value>& vs);
std::vector<Value> unpack_value(const Value& v, size_t n);

class Evaluator {
 public:
  Evaluator(const Model& m, const Signature& sig);
  ~Evaluator();
  Evaluator(const Evaluator&) = delete;
  Evaluator& operator=(const Evaluator&) = delete;

  const Model& model() const { return model_; }
  const Signature& signature() const { return sig_; }

  // Compiles f against ctx; the handle stays valid for the evaluator's life.
  int compile(const Form& f, const TermCtx& ctx);
  const FinSet& set(int id, const Point& pt);
  // Action along m from point a to point b; x is an element at a.
  Value act(int id, const Point& a, const Point& b, const MorPoint& m, const Value& x);

  const FinCat& cat(const Cat& c) { return model_.cat(c); }
  MorPoint identity(const TermCtx& ctx, const Point& pt);

  int compile_term(const Term& t, const TermCtx& ctx);
  int term_object(int id, const Point& pt);

  struct Impl;

 private:
  const Model& model_;
  const Signature& sig_;
  std::unique_ptr<Impl> impl_;
};

// Set of f at a point of ctx (fresh evaluator).
FinSet eval_formula(const Form& f, const Model& m, const Signature& sig, const TermCtx& ctx, const Point& pt);

// Tables of a sequent's hypotheses and goal at each diagonal point, points in
// row-major order (first context variable most significant).
class SeqSem {
 public:
  SeqSem(Evaluator& ev, const Sequent& s);

  const Sequent& seq() const { return seq_; }
  size_t npoints() const { return npoints_; }
  std::vector<int> point(size_t i) const;
  size_t point_index(const std::vector<int>& objs) const;
  const std::vector<const FinCat*>& cats() const { return cats_; }

  std::vector<const FinSet*> hyp_sets(const Point& pt) const;
  const FinSet& goal_set(const Point& pt) const;
  size_t ninputs(const Point& pt) const;
  std::vector<Value> decode(const Point& pt, size_t k) const;
  // -1 if some component is not in its set.
  long encode(const Point& pt, const std::vector<Value>& ks) const;

  int hyp_id(size_t i) const { return hyps_[i]; }
  int goal_id() const { return goal_; }
  Evaluator& ev() const { return ev_; }

 private:
  Evaluator& ev_;
  Sequent seq_;
  std::vector<int> hyps_;
  int goal_;
  std::vector<const FinCat*> cats_;
  size_t npoints_ = 1;
};

// Per diagonal point, a table from hypothesis tuples to goal elements.
struct DinatFamily {
  Sequent seq;
  std::vector<std::vector<Value>> table;
};

using FamilyEnv = std::map<std::string, DinatFamily>;

// Evaluates a checked derivation. Premise leaves are read from env. When
// check is set, the result goes through check_dinatural and a failure
// raises a Soundness error.
DinatFamily eval_derivation(Evaluator& ev, const Deriv& d, const Defs* defs = nullptr, const FamilyEnv& env = {},
                            bool check = true);

struct HexagonFailure {
  std::string var;
  std::string morphism;
  std::vector<int> at;  // other variables
  std::string input;
  std::string lhs, rhs;
};

std::optional<HexagonFailure> hexagon_failure(Evaluator& ev, const DinatFamily& fam);
bool check_dinatural(Evaluator& ev, const DinatFamily& fam);
// Throws SchemaMismatch when shapes differ.
bool families_equal(const DinatFamily& a, const DinatFamily& b);

struct EnumOptions {
  size_t limit = SIZE_MAX;  // stop after this many families
  long max_nodes = 50'000'000;
};

std::vector<DinatFamily> enumerate_dinaturals(Evaluator& ev, const Sequent& s, const EnumOptions& opt = {});
size_t count_dinaturals(Evaluator& ev, const Sequent& s, const EnumOptions& opt = {});

// Projection [ctx, x] p : end x. body ⊢ body and injection
// [ctx, x] p : body ⊢ coend x. body; the (co)end set is the hypothesis
// (goal) set of the returned family.
DinatFamily compute_end(Evaluator& ev, const TermCtx& ctx, const std::string& x, const Cat& c, const Form& body);
DinatFamily compute_coend(Evaluator& ev, const TermCtx& ctx, const std::string& x, const Cat& c, const Form& body);

// Pointwise composite of alpha: Γ ⊢ B and beta: b:B ⊢ D over the same context.
DinatFamily compose_pointwise(Evaluator& ev, const DinatFamily& alpha, const DinatFamily& beta);

}  // namespace dinat
