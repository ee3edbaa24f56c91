#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "dinat/syntax.hpp"

namespace dinat {

enum class Rule {
  Id,
  Refl,
  TopIntro,
  Premise,  // open leaf, instantiated at evaluation time
  Use,      // reference to a named derivation
  Pair,
  Proj1,
  Proj2,
  Weaken,
  Curry,
  Uncurry,
  Reindex,
  J,
  JInv,
  JWithEq,
  EndIntro,
  EndElim,
  CoendIntro,
  CoendElim,
  Exchange,
  PairCtx,
  UnpairCtx,
  Reorient,
  ImpFunc,
  Compose,
  // macros
  Yoneda,
  CoYoneda,
  Fubini,
  CoendFrobenius,
  HomRelAdj,
};

const char* rule_name(Rule r);
std::optional<Rule> rule_from_name(const std::string& s);
bool is_macro(Rule r);
// Number of sub-derivations the rule takes.
int rule_arity(Rule r);

struct DerivNode;
using Deriv = std::shared_ptr<const DerivNode>;

struct DerivNode {
  Rule rule;
  std::vector<std::string> names;  // labels, variables, premise/reference names
  Subst subst;                     // Reindex only
  std::vector<Deriv> kids;
  Sequent concl;                   // claimed conclusion
};

Deriv make_deriv(Rule r, std::vector<std::string> names, std::vector<Deriv> kids, Sequent concl,
                 Subst subst = {});

using Defs = std::map<std::string, Deriv>;

struct CheckResult {
  Sequent concl;
  std::map<std::string, Sequent> premises;  // open leaves by name
};

// Checks every node against its rule schema. Macros are checked by expansion,
// `use` nodes against `defs`.
CheckResult check(const Deriv& d, const Signature& sig, const Defs* defs = nullptr);
Sequent check_derivation(const Deriv& d, const Signature& sig, const Defs* defs = nullptr);

// ---- hom elimination ----

struct HomHyp {
  int index;
  std::string a, b;  // contravariant and covariant endpoint
  Cat cat;
};

// Throws SchemaMismatch if `e` is not hom(~a, b) between distinct context
// variables of the hom category.
HomHyp hom_hyp(const Sequent& s, const std::string& e, const std::string& node = "");

// Relative to the annotation each endpoint has in e: the other hypotheses
// must use a and b with the opposite polarity, the goal with the same one.
bool check_hom_elim_side_condition(const Sequent& s, const std::string& a, const std::string& b,
                                   const std::string& e);
std::optional<Error> hom_elim_violation(const Sequent& s, const std::string& e, const std::string& node);

// Drops e, merges b into a; a keeps its context position.
Sequent contract(const Sequent& s, const std::string& e);

// ---- composition guard ----

// Plugging `inner` (Γ ⊢ B) into hypothesis `label` of `outer` is admitted
// when, for every variable in B, one side uses it with a single variance.
std::optional<Error> compose_violation(const Sequent& outer, const std::string& label, const Sequent& inner,
                                       const std::string& node);

// ---- macros and rewriting ----

// One-step expansion of a macro node into primitive rules.
Deriv expand_macro(const Deriv& d, const Signature& sig);
// Inlines `use` references and expands all macros.
Deriv expand_all(const Deriv& d, const Signature& sig, const Defs* defs = nullptr);

// Rewrites Jinv_e(J_e(h)) to h everywhere.
Deriv jcomp_normalize(const Deriv& d, const Signature& sig, const Defs* defs = nullptr);
bool deriv_equal(const Deriv& a, const Deriv& b);

// Renames the context variables of s to those of target (same length and
// categories required).
Sequent rename_ctx(const Sequent& s, const TermCtx& target);

// ---- equational judgements ----

enum class EqStrategy { JEq, Direct };

struct EqJudgement {
  std::string name;
  Deriv lhs, rhs;
  EqStrategy strategy = EqStrategy::Direct;
  std::string label;  // equality hypothesis for JEq
};

// Returns the remaining obligations: empty if the sides agree syntactically
// after J-computation rewriting, otherwise the judgement itself (Direct) or
// both sides precomposed with refl on `label` (JEq).
std::vector<EqJudgement> check_eq_judgement(const EqJudgement& j, const Signature& sig, const Defs* defs = nullptr);

// ---- bounded search ----

struct SearchStats {
  long nodes = 0;
};

// Exhaustive backwards search over closed derivations of depth <= depth.
// Rules whose premises are not determined by the conclusion draw their
// parameters from the subformulas of the goal sequent.
std::optional<Deriv> bounded_search(const Sequent& goal, const Signature& sig, int depth,
                                    SearchStats* stats = nullptr);

}  // namespace dinat
