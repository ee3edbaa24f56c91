#pragma once

#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "dinat/error.hpp"

namespace dinat {

enum class Polarity { Pos, Neg };

inline Polarity flip(Polarity p) { return p == Polarity::Pos ? Polarity::Neg : Polarity::Pos; }
inline Polarity operator*(Polarity a, Polarity b) {
  return a == b ? Polarity::Pos : Polarity::Neg;
}
inline const char* pol_sign(Polarity p) { return p == Polarity::Pos ? "+" : "-"; }

// ---- category expressions ----

struct CatNode;
using Cat = std::shared_ptr<const CatNode>;

struct CatNode {
  enum class Kind { Base, Op, Prod, Unit };
  Kind kind;
  std::string name;  // Base
  Cat left, right;   // Op uses left; Prod uses both
};

Cat cat_base(const std::string& name);
Cat cat_op(Cat c);
Cat cat_prod(Cat a, Cat b);
Cat cat_unit();

Cat normalize(const Cat& c);
bool cat_equal(const Cat& a, const Cat& b);
std::string to_string(const Cat& c);
// Base names mentioned anywhere in c.
void cat_bases(const Cat& c, std::set<std::string>& out);

// ---- terms ----

struct TermNode;
using Term = std::shared_ptr<const TermNode>;

struct TermNode {
  enum class Kind { Var, App, Pair, Proj };
  Kind kind;
  std::string name;  // variable or functor name
  Polarity pol = Polarity::Pos;  // Var only
  int index = 0;                 // Proj: 1 or 2
  std::vector<Term> args;        // App args; Pair (2); Proj (1)
};

Term var(const std::string& name, Polarity p = Polarity::Pos);
Term app(const std::string& f, std::vector<Term> args);
Term pair(Term a, Term b);
// Reduces proj of a literal pair.
Term proj(int i, Term t);

Term flip_term(const Term& t);
bool term_equal(const Term& a, const Term& b);
std::string to_string(const Term& t);

// ---- formulas ----

struct FormulaNode;
using Form = std::shared_ptr<const FormulaNode>;

struct FormulaNode {
  enum class Kind { Top, Hom, Atom, And, Imp, End, Coend };
  Kind kind;
  std::string name;          // Atom name or binder variable
  Cat cat;                   // Hom category or binder category
  std::vector<Term> terms;   // Hom (2) or Atom arguments
  Form left, right;          // And/Imp; End/Coend body in left
};

Form top();
Form hom(Cat c, Term s, Term t);
Form atom(const std::string& name, std::vector<Term> args);
Form conj(Form a, Form b);
Form imp(Form a, Form b);
Form end_(const std::string& x, Cat c, Form body);
Form coend(const std::string& x, Cat c, Form body);

// Right-nested conjunction; empty list is Top.
Form pack(const std::vector<Form>& fs);

// Flips every variable annotation, bound ones included: the syntactic F^op.
Form flip_form(const Form& f);

std::set<std::string> free_vars(const Form& f);
void free_vars(const Term& t, std::set<std::string>& out);
bool mentions(const Form& f, const std::string& v);

std::string to_string(const Form& f);

// ---- sequents ----

struct CtxEntry {
  std::string name;
  Cat cat;
};
using TermCtx = std::vector<CtxEntry>;

struct Hyp {
  std::string label;
  Form form;
};

struct Sequent {
  TermCtx ctx;
  std::vector<Hyp> hyps;
  Form goal;

  int ctx_index(const std::string& v) const;
  int hyp_index(const std::string& label) const;
  std::vector<Form> hyp_forms() const;
};

std::string to_string(const Sequent& s);
std::string to_string(const TermCtx& ctx);

// ---- signatures ----

struct Slot {
  Cat cat;
  Polarity pol;
};

struct AtomSig {
  std::vector<Slot> slots;
};

struct FunctorSig {
  Cat dom, cod;
};

struct Signature {
  std::vector<std::string> categories;
  std::map<std::string, AtomSig> atoms;
  std::map<std::string, FunctorSig> functors;

  bool has_category(const std::string& c) const;
};

// ---- typing and polarity ----

using TypeEnv = std::vector<CtxEntry>;  // innermost binding last

std::optional<Cat> lookup(const TypeEnv& env, const std::string& v);

// Type of a term; throws on unbound names or ill-typed projections.
Cat infer_term(const Term& t, const TypeEnv& env, const Signature& sig);
// Checks t at category `cat` in a slot of polarity `pol`; annotations must
// agree with the polarity they compute to.
void check_term(const Term& t, const Cat& cat, Polarity pol, const TypeEnv& env,
                const Signature& sig);
// Checks the formula at sign `sign` (Neg on the left of an implication).
void check_formula(const Form& f, const TypeEnv& env, const Signature& sig,
                   Polarity sign = Polarity::Pos);
void check_sequent(const Sequent& s, const Signature& sig);

// A path names a position inside a formula, e.g. "imp.l/hom#1".
struct Occurrence {
  std::string path;
  Polarity pol;
};

// Occurrences as annotated on the syntax.
std::vector<Occurrence> occurrences(const Form& f, const std::string& v);
// Occurrences with polarities recomputed from slot variances and sign flips.
std::vector<Occurrence> computed_occurrences(const Form& f, const std::string& v,
                                             const TypeEnv& env, const Signature& sig);

// ---- substitution and alpha-equality ----

using Subst = std::vector<std::pair<std::string, Term>>;

Term substitute(const Term& t, const Subst& s);
// Simultaneous, capture-avoiding. Negative occurrences get the flipped term.
Form substitute(const Form& f, const Subst& s);
Form substitute(const Form& f, const std::string& v, const Term& t);
// Checked variant: t must have the category of v.
Form substitute_checked(const Form& f, const std::string& v, const Term& t,
                        const TypeEnv& env, const Signature& sig);

using Renaming = std::map<std::string, std::string>;

bool alpha_equal(const Form& a, const Form& b);
// Free variables of b are renamed through `rn` before comparison.
bool alpha_equal(const Form& a, const Form& b, const Renaming& rn);
// Ctx entries are compared positionally (names act as binders); labels are
// ignored.
bool sequent_equal(const Sequent& a, const Sequent& b);

std::string fresh_name(const std::string& base, const std::set<std::string>& avoid);

}  // namespace dinat
