#include "dinat/syntax.hpp"

#include <algorithm>

namespace dinat {

// ---- categories ----

Cat cat_base(const std::string& name) {
  return std::make_shared<CatNode>(CatNode{CatNode::Kind::Base, name, nullptr, nullptr});
}
Cat cat_op(Cat c) {
  return std::make_shared<CatNode>(CatNode{CatNode::Kind::Op, "", std::move(c), nullptr});
}
Cat cat_prod(Cat a, Cat b) {
  return std::make_shared<CatNode>(CatNode{CatNode::Kind::Prod, "", std::move(a), std::move(b)});
}
Cat cat_unit() {
  static const Cat u = std::make_shared<CatNode>(CatNode{CatNode::Kind::Unit, "", nullptr, nullptr});
  return u;
}

Cat normalize(const Cat& c) {
  switch (c->kind) {
    case CatNode::Kind::Base:
    case CatNode::Kind::Unit:
      return c;
    case CatNode::Kind::Prod:
      return cat_prod(normalize(c->left), normalize(c->right));
    case CatNode::Kind::Op: {
      Cat n = normalize(c->left);
      switch (n->kind) {
        case CatNode::Kind::Base: return cat_op(n);
        case CatNode::Kind::Op: return n->left;
        case CatNode::Kind::Unit: return n;
        case CatNode::Kind::Prod:
          return cat_prod(normalize(cat_op(n->left)), normalize(cat_op(n->right)));
      }
    }
  }
  return c;
}

bool cat_equal(const Cat& a, const Cat& b) {
  if (a == b) return true;
  if (a->kind != b->kind) return false;
  switch (a->kind) {
    case CatNode::Kind::Base: return a->name == b->name;
    case CatNode::Kind::Unit: return true;
    case CatNode::Kind::Op: return cat_equal(a->left, b->left);
    case CatNode::Kind::Prod: return cat_equal(a->left, b->left) && cat_equal(a->right, b->right);
  }
  return false;
}

static std::string cat_str(const Cat& c, bool in_prod) {
  switch (c->kind) {
    case CatNode::Kind::Base: return c->name;
    case CatNode::Kind::Unit: return "1";
    case CatNode::Kind::Op: {
      bool atomic = c->left->kind == CatNode::Kind::Base || c->left->kind == CatNode::Kind::Unit ||
                    c->left->kind == CatNode::Kind::Op;
      return atomic ? cat_str(c->left, false) + "^op" : "(" + cat_str(c->left, false) + ")^op";
    }
    case CatNode::Kind::Prod: {
      // '*' is right associative
      std::string l = cat_str(c->left, true);
      if (c->left->kind == CatNode::Kind::Prod) l = "(" + cat_str(c->left, false) + ")";
      std::string s = l + " * " + cat_str(c->right, false);
      return in_prod ? "(" + s + ")" : s;
    }
  }
  return "?";
}

std::string to_string(const Cat& c) { return cat_str(c, false); }

void cat_bases(const Cat& c, std::set<std::string>& out) {
  if (!c) return;
  if (c->kind == CatNode::Kind::Base) out.insert(c->name);
  cat_bases(c->left, out);
  cat_bases(c->right, out);
}

// ---- terms ----

Term var(const std::string& name, Polarity p) {
  auto t = std::make_shared<TermNode>();
  t->kind = TermNode::Kind::Var;
  t->name = name;
  t->pol = p;
  return t;
}

Term app(const std::string& f, std::vector<Term> args) {
  auto t = std::make_shared<TermNode>();
  t->kind = TermNode::Kind::App;
  t->name = f;
  t->args = std::move(args);
  return t;
}

Term pair(Term a, Term b) {
  auto t = std::make_shared<TermNode>();
  t->kind = TermNode::Kind::Pair;
  t->args = {std::move(a), std::move(b)};
  return t;
}

Term proj(int i, Term u) {
  if (u->kind == TermNode::Kind::Pair) return u->args[i - 1];
  auto t = std::make_shared<TermNode>();
  t->kind = TermNode::Kind::Proj;
  t->index = i;
  t->args = {std::move(u)};
  return t;
}

Term flip_term(const Term& t) {
  if (t->kind == TermNode::Kind::Var) return var(t->name, flip(t->pol));
  auto n = std::make_shared<TermNode>(*t);
  for (auto& a : n->args) a = flip_term(a);
  return n;
}

bool term_equal(const Term& a, const Term& b) {
  if (a->kind != b->kind || a->name != b->name || a->pol != b->pol || a->index != b->index ||
      a->args.size() != b->args.size())
    return false;
  for (size_t i = 0; i < a->args.size(); ++i)
    if (!term_equal(a->args[i], b->args[i])) return false;
  return true;
}

std::string to_string(const Term& t) {
  switch (t->kind) {
    case TermNode::Kind::Var:
      return (t->pol == Polarity::Neg ? "~" : "") + t->name;
    case TermNode::Kind::App: {
      std::string s = t->name + "(";
      for (size_t i = 0; i < t->args.size(); ++i) s += (i ? ", " : "") + to_string(t->args[i]);
      return s + ")";
    }
    case TermNode::Kind::Pair:
      return "<" + to_string(t->args[0]) + ", " + to_string(t->args[1]) + ">";
    case TermNode::Kind::Proj:
      return std::string(t->index == 1 ? "fst(" : "snd(") + to_string(t->args[0]) + ")";
  }
  return "?";
}

void free_vars(const Term& t, std::set<std::string>& out) {
  if (t->kind == TermNode::Kind::Var) out.insert(t->name);
  for (auto& a : t->args) free_vars(a, out);
}

// ---- formulas ----

static Form mk(FormulaNode n) { return std::make_shared<FormulaNode>(std::move(n)); }

Form top() {
  static const Form t = mk(FormulaNode{FormulaNode::Kind::Top, "", nullptr, {}, nullptr, nullptr});
  return t;
}
Form hom(Cat c, Term s, Term t) {
  return mk(FormulaNode{FormulaNode::Kind::Hom, "", std::move(c), {std::move(s), std::move(t)}, nullptr, nullptr});
}
Form atom(const std::string& name, std::vector<Term> args) {
  return mk(FormulaNode{FormulaNode::Kind::Atom, name, nullptr, std::move(args), nullptr, nullptr});
}
Form conj(Form a, Form b) {
  return mk(FormulaNode{FormulaNode::Kind::And, "", nullptr, {}, std::move(a), std::move(b)});
}
Form imp(Form a, Form b) {
  return mk(FormulaNode{FormulaNode::Kind::Imp, "", nullptr, {}, std::move(a), std::move(b)});
}
Form end_(const std::string& x, Cat c, Form body) {
  return mk(FormulaNode{FormulaNode::Kind::End, x, std::move(c), {}, std::move(body), nullptr});
}
Form coend(const std::string& x, Cat c, Form body) {
  return mk(FormulaNode{FormulaNode::Kind::Coend, x, std::move(c), {}, std::move(body), nullptr});
}

Form pack(const std::vector<Form>& fs) {
  if (fs.empty()) return top();
  Form acc = fs.back();
  for (size_t i = fs.size() - 1; i-- > 0;) acc = conj(fs[i], acc);
  return acc;
}

Form flip_form(const Form& f) {
  if (f->kind == FormulaNode::Kind::Top) return f;
  auto n = std::make_shared<FormulaNode>(*f);
  for (auto& t : n->terms) t = flip_term(t);
  if (n->left) n->left = flip_form(n->left);
  if (n->right) n->right = flip_form(n->right);
  return n;
}

static void fv(const Form& f, std::set<std::string>& out) {
  for (auto& t : f->terms) free_vars(t, out);
  switch (f->kind) {
    case FormulaNode::Kind::And:
    case FormulaNode::Kind::Imp:
      fv(f->left, out);
      fv(f->right, out);
      break;
    case FormulaNode::Kind::End:
    case FormulaNode::Kind::Coend: {
      std::set<std::string> inner;
      fv(f->left, inner);
      inner.erase(f->name);
      out.insert(inner.begin(), inner.end());
      break;
    }
    default:
      break;
  }
}

std::set<std::string> free_vars(const Form& f) {
  std::set<std::string> out;
  fv(f, out);
  return out;
}

bool mentions(const Form& f, const std::string& v) { return free_vars(f).count(v) > 0; }

namespace {

enum Prec { kBinder = 0, kImp = 1, kAnd = 2, kAtomic = 3 };

int prec(const Form& f) {
  switch (f->kind) {
    case FormulaNode::Kind::Imp: return kImp;
    case FormulaNode::Kind::And: return kAnd;
    case FormulaNode::Kind::End:
    case FormulaNode::Kind::Coend: return kBinder;
    default: return kAtomic;
  }
}

std::string form_str(const Form& f, int ctx) {
  std::string s;
  switch (f->kind) {
    case FormulaNode::Kind::Top: s = "top"; break;
    case FormulaNode::Kind::Hom:
      s = "hom[" + to_string(f->cat) + "](" + to_string(f->terms[0]) + ", " + to_string(f->terms[1]) + ")";
      break;
    case FormulaNode::Kind::Atom: {
      s = f->name + "(";
      for (size_t i = 0; i < f->terms.size(); ++i) s += (i ? ", " : "") + to_string(f->terms[i]);
      s += ")";
      break;
    }
    case FormulaNode::Kind::And:
      s = form_str(f->left, kAtomic) + " & " + form_str(f->right, kAnd);
      break;
    case FormulaNode::Kind::Imp:
      s = form_str(f->left, kAnd) + " => " + form_str(f->right, kImp);
      break;
    case FormulaNode::Kind::End:
    case FormulaNode::Kind::Coend:
      s = std::string(f->kind == FormulaNode::Kind::End ? "end " : "coend ") + f->name + ":" +
          to_string(f->cat) + ". " + form_str(f->left, kBinder);
      break;
  }
  // binders extend to the right, so they are bracketed anywhere but at the top
  bool paren = prec(f) < ctx || (prec(f) == kBinder && ctx > kBinder);
  return paren ? "(" + s + ")" : s;
}

}  // namespace

std::string to_string(const Form& f) { return form_str(f, kBinder); }

// ---- sequents ----

int Sequent::ctx_index(const std::string& v) const {
  for (size_t i = 0; i < ctx.size(); ++i)
    if (ctx[i].name == v) return static_cast<int>(i);
  return -1;
}

int Sequent::hyp_index(const std::string& label) const {
  for (size_t i = 0; i < hyps.size(); ++i)
    if (hyps[i].label == label) return static_cast<int>(i);
  return -1;
}

std::vector<Form> Sequent::hyp_forms() const {
  std::vector<Form> out;
  for (auto& h : hyps) out.push_back(h.form);
  return out;
}

std::string to_string(const TermCtx& ctx) {
  std::string s = "[";
  for (size_t i = 0; i < ctx.size(); ++i) s += (i ? ", " : "") + ctx[i].name + ":" + to_string(ctx[i].cat);
  return s + "]";
}

std::string to_string(const Sequent& s) {
  std::string out = to_string(s.ctx);
  for (size_t i = 0; i < s.hyps.size(); ++i)
    out += (i ? ", " : " ") + s.hyps[i].label + ":" + to_string(s.hyps[i].form);
  return out + " |- " + to_string(s.goal);
}

bool Signature::has_category(const std::string& c) const {
  return std::find(categories.begin(), categories.end(), c) != categories.end();
}

// ---- typing ----

std::optional<Cat> lookup(const TypeEnv& env, const std::string& v) {
  for (size_t i = env.size(); i-- > 0;)
    if (env[i].name == v) return env[i].cat;
  return std::nullopt;
}

static void check_cat(const Cat& c, const Signature& sig) {
  std::set<std::string> bases;
  cat_bases(c, bases);
  for (auto& b : bases)
    if (!sig.has_category(b)) throw Error(ErrorKind::UnboundVariable, "undeclared category " + b);
}

static const FunctorSig& functor_sig(const Signature& sig, const std::string& f) {
  auto it = sig.functors.find(f);
  if (it == sig.functors.end()) throw Error(ErrorKind::UnboundVariable, "undeclared functor " + f);
  return it->second;
}

// Splits a right-nested product domain into n components.
static std::vector<Cat> split_domain(const Cat& dom, size_t n, const std::string& f) {
  std::vector<Cat> out;
  Cat rest = dom;
  for (size_t i = 0; i + 1 < n; ++i) {
    if (rest->kind != CatNode::Kind::Prod)
      throw Error(ErrorKind::ArityMismatch, "functor " + f + " applied to " + std::to_string(n) + " arguments");
    out.push_back(rest->left);
    rest = rest->right;
  }
  out.push_back(rest);
  return out;
}

Cat infer_term(const Term& t, const TypeEnv& env, const Signature& sig) {
  switch (t->kind) {
    case TermNode::Kind::Var: {
      auto c = lookup(env, t->name);
      if (!c) throw Error(ErrorKind::UnboundVariable, "unbound variable " + t->name);
      return *c;
    }
    case TermNode::Kind::App:
      return functor_sig(sig, t->name).cod;
    case TermNode::Kind::Pair:
      return cat_prod(infer_term(t->args[0], env, sig), infer_term(t->args[1], env, sig));
    case TermNode::Kind::Proj: {
      Cat u = infer_term(t->args[0], env, sig);
      if (u->kind != CatNode::Kind::Prod)
        throw Error(ErrorKind::TypeMismatch, "projection from " + to_string(t->args[0]) + " : " + to_string(u));
      return t->index == 1 ? u->left : u->right;
    }
  }
  return nullptr;
}

// Returns the polarity `t` must be checked at in its own category so that it
// lands in `cat` with polarity `pol`.
static Polarity align(const Cat& own, const Cat& cat, Polarity pol, const Term& t) {
  if (cat_equal(own, cat)) return pol;
  if (cat_equal(normalize(cat_op(own)), cat)) return flip(pol);
  throw Error(ErrorKind::TypeMismatch,
              to_string(t) + " : " + to_string(own) + " used at category " + to_string(cat));
}

void check_term(const Term& t, const Cat& cat, Polarity pol, const TypeEnv& env, const Signature& sig) {
  switch (t->kind) {
    case TermNode::Kind::Var: {
      Cat own = infer_term(t, env, sig);
      Polarity want = align(own, cat, pol, t);
      if (t->pol != want)
        throw Error(ErrorKind::TypeMismatch, "annotation of " + t->name + " must be " +
                                                 (want == Polarity::Neg ? "~" : "") + t->name + " here");
      return;
    }
    case TermNode::Kind::Pair:
      if (cat->kind != CatNode::Kind::Prod)
        throw Error(ErrorKind::TypeMismatch, to_string(t) + " used at non-product " + to_string(cat));
      check_term(t->args[0], cat->left, pol, env, sig);
      check_term(t->args[1], cat->right, pol, env, sig);
      return;
    case TermNode::Kind::Proj: {
      Cat own = infer_term(t, env, sig);
      Polarity p = align(own, cat, pol, t);
      Cat u = infer_term(t->args[0], env, sig);
      check_term(t->args[0], u, p, env, sig);
      return;
    }
    case TermNode::Kind::App: {
      const FunctorSig& fs = functor_sig(sig, t->name);
      Polarity p = align(fs.cod, cat, pol, t);
      if (t->args.empty()) throw Error(ErrorKind::ArityMismatch, "functor " + t->name + " applied to no arguments");
      auto doms = split_domain(fs.dom, t->args.size(), t->name);
      for (size_t i = 0; i < t->args.size(); ++i) check_term(t->args[i], doms[i], p, env, sig);
      return;
    }
  }
}

void check_formula(const Form& f, const TypeEnv& env, const Signature& sig, Polarity sign) {
  switch (f->kind) {
    case FormulaNode::Kind::Top:
      return;
    case FormulaNode::Kind::Hom:
      check_cat(f->cat, sig);
      check_term(f->terms[0], f->cat, flip(sign), env, sig);
      check_term(f->terms[1], f->cat, sign, env, sig);
      return;
    case FormulaNode::Kind::Atom: {
      auto it = sig.atoms.find(f->name);
      if (it == sig.atoms.end()) throw Error(ErrorKind::UnboundVariable, "undeclared atom " + f->name);
      const auto& slots = it->second.slots;
      if (slots.size() != f->terms.size())
        throw Error(ErrorKind::ArityMismatch, "atom " + f->name + " expects " + std::to_string(slots.size()) +
                                                  " arguments, got " + std::to_string(f->terms.size()));
      for (size_t i = 0; i < slots.size(); ++i) check_term(f->terms[i], slots[i].cat, sign * slots[i].pol, env, sig);
      return;
    }
    case FormulaNode::Kind::And:
      check_formula(f->left, env, sig, sign);
      check_formula(f->right, env, sig, sign);
      return;
    case FormulaNode::Kind::Imp:
      check_formula(f->left, env, sig, flip(sign));
      check_formula(f->right, env, sig, sign);
      return;
    case FormulaNode::Kind::End:
    case FormulaNode::Kind::Coend: {
      check_cat(f->cat, sig);
      TypeEnv inner = env;
      inner.push_back({f->name, f->cat});
      check_formula(f->left, inner, sig, sign);
      return;
    }
  }
}

void check_sequent(const Sequent& s, const Signature& sig) {
  std::set<std::string> names, labels;
  for (auto& e : s.ctx) {
    if (!names.insert(e.name).second) throw Error(ErrorKind::SchemaMismatch, "duplicate context variable " + e.name);
    check_cat(e.cat, sig);
  }
  for (auto& h : s.hyps) {
    if (!labels.insert(h.label).second) throw Error(ErrorKind::SchemaMismatch, "duplicate hypothesis label " + h.label);
    check_formula(h.form, s.ctx, sig);
  }
  check_formula(s.goal, s.ctx, sig);
}

// ---- occurrences ----

namespace {

struct OccWalker {
  const std::string& v;
  const Signature* sig = nullptr;  // null: read annotations
  std::vector<Occurrence> out;

  void term(const Term& t, const std::string& path, const Cat& cat, Polarity pol, const TypeEnv& env) {
    switch (t->kind) {
      case TermNode::Kind::Var:
        if (t->name == v) {
          Polarity p = t->pol;
          if (sig) p = align(infer_term(t, env, *sig), cat, pol, t);
          out.push_back({path, p});
        }
        return;
      case TermNode::Kind::Pair:
        term(t->args[0], path + "/pair.l", cat ? cat->left : nullptr, pol, env);
        term(t->args[1], path + "/pair.r", cat ? cat->right : nullptr, pol, env);
        return;
      case TermNode::Kind::Proj: {
        Polarity p = pol;
        Cat u;
        if (sig) {
          p = align(infer_term(t, env, *sig), cat, pol, t);
          u = infer_term(t->args[0], env, *sig);
        }
        term(t->args[0], path + (t->index == 1 ? "/fst" : "/snd"), u, p, env);
        return;
      }
      case TermNode::Kind::App: {
        Polarity p = pol;
        std::vector<Cat> doms(t->args.size());
        if (sig) {
          const FunctorSig& fs = functor_sig(*sig, t->name);
          p = align(fs.cod, cat, pol, t);
          doms = split_domain(fs.dom, t->args.size(), t->name);
        }
        for (size_t i = 0; i < t->args.size(); ++i)
          term(t->args[i], path + "/" + t->name + "#" + std::to_string(i + 1), doms[i], p, env);
        return;
      }
    }
  }

  void form(const Form& f, const std::string& path, Polarity sign, const TypeEnv& env) {
    auto sub = [&](const std::string& step) { return path.empty() ? step : path + "/" + step; };
    switch (f->kind) {
      case FormulaNode::Kind::Top:
        return;
      case FormulaNode::Kind::Hom:
        term(f->terms[0], sub("hom#1"), f->cat, flip(sign), env);
        term(f->terms[1], sub("hom#2"), f->cat, sign, env);
        return;
      case FormulaNode::Kind::Atom: {
        const AtomSig* as = nullptr;
        if (sig) {
          auto it = sig->atoms.find(f->name);
          if (it == sig->atoms.end()) throw Error(ErrorKind::UnboundVariable, "undeclared atom " + f->name);
          as = &it->second;
        }
        for (size_t i = 0; i < f->terms.size(); ++i)
          term(f->terms[i], sub(f->name + "#" + std::to_string(i + 1)), as ? as->slots[i].cat : nullptr,
               as ? sign * as->slots[i].pol : sign, env);
        return;
      }
      case FormulaNode::Kind::And:
        form(f->left, sub("and.l"), sign, env);
        form(f->right, sub("and.r"), sign, env);
        return;
      case FormulaNode::Kind::Imp:
        form(f->left, sub("imp.l"), flip(sign), env);
        form(f->right, sub("imp.r"), sign, env);
        return;
      case FormulaNode::Kind::End:
      case FormulaNode::Kind::Coend: {
        if (f->name == v) return;
        TypeEnv inner = env;
        inner.push_back({f->name, f->cat});
        form(f->left, sub((f->kind == FormulaNode::Kind::End ? "end." : "coend.") + f->name), sign, inner);
        return;
      }
    }
  }
};

}  // namespace

std::vector<Occurrence> occurrences(const Form& f, const std::string& v) {
  OccWalker w{v, nullptr, {}};
  w.form(f, "", Polarity::Pos, {});
  return w.out;
}

std::vector<Occurrence> computed_occurrences(const Form& f, const std::string& v, const TypeEnv& env,
                                             const Signature& sig) {
  if (!lookup(env, v)) throw Error(ErrorKind::UnboundVariable, "unbound variable " + v);
  OccWalker w{v, &sig, {}};
  w.form(f, "", Polarity::Pos, env);
  return w.out;
}

// ---- substitution ----

static const Term* find_subst(const Subst& s, const std::string& v) {
  for (auto& [k, t] : s)
    if (k == v) return &t;
  return nullptr;
}

Term substitute(const Term& t, const Subst& s) {
  switch (t->kind) {
    case TermNode::Kind::Var: {
      const Term* r = find_subst(s, t->name);
      if (!r) return t;
      return t->pol == Polarity::Pos ? *r : flip_term(*r);
    }
    case TermNode::Kind::Proj:
      return proj(t->index, substitute(t->args[0], s));
    default: {
      auto n = std::make_shared<TermNode>(*t);
      for (auto& a : n->args) a = substitute(a, s);
      return n;
    }
  }
}

std::string fresh_name(const std::string& base, const std::set<std::string>& avoid) {
  if (!avoid.count(base)) return base;
  for (int i = 1;; ++i) {
    std::string c = base + std::to_string(i);
    if (!avoid.count(c)) return c;
  }
}

Form substitute(const Form& f, const Subst& s) {
  if (s.empty()) return f;
  switch (f->kind) {
    case FormulaNode::Kind::Top:
      return f;
    case FormulaNode::Kind::Hom:
    case FormulaNode::Kind::Atom: {
      auto n = std::make_shared<FormulaNode>(*f);
      for (auto& t : n->terms) t = substitute(t, s);
      return n;
    }
    case FormulaNode::Kind::And:
    case FormulaNode::Kind::Imp: {
      auto n = std::make_shared<FormulaNode>(*f);
      n->left = substitute(f->left, s);
      n->right = substitute(f->right, s);
      return n;
    }
    case FormulaNode::Kind::End:
    case FormulaNode::Kind::Coend: {
      Subst inner;
      std::set<std::string> incoming;
      for (auto& [k, t] : s) {
        if (k == f->name) continue;
        inner.push_back({k, t});
        free_vars(t, incoming);
      }
      std::string x = f->name;
      if (incoming.count(x)) {
        std::set<std::string> avoid = incoming;
        auto body_fv = free_vars(f->left);
        avoid.insert(body_fv.begin(), body_fv.end());
        for (auto& [k, t] : inner) avoid.insert(k);
        x = fresh_name(f->name, avoid);
        inner.push_back({f->name, var(x)});
      }
      auto n = std::make_shared<FormulaNode>(*f);
      n->name = x;
      n->left = substitute(f->left, inner);
      return n;
    }
  }
  return f;
}

Form substitute(const Form& f, const std::string& v, const Term& t) { return substitute(f, Subst{{v, t}}); }

Form substitute_checked(const Form& f, const std::string& v, const Term& t, const TypeEnv& env,
                        const Signature& sig) {
  auto vc = lookup(env, v);
  if (!vc) throw Error(ErrorKind::UnboundVariable, "unbound variable " + v);
  check_term(t, *vc, Polarity::Pos, env, sig);
  return substitute(f, v, t);
}

// ---- alpha equality ----

namespace {

struct AlphaCmp {
  std::vector<std::string> as, bs;
  const Renaming* rn;

  static int level(const std::vector<std::string>& st, const std::string& v) {
    for (size_t i = st.size(); i-- > 0;)
      if (st[i] == v) return static_cast<int>(i);
    return -1;
  }

  bool term(const Term& a, const Term& b) {
    if (a->kind != b->kind || a->args.size() != b->args.size()) return false;
    switch (a->kind) {
      case TermNode::Kind::Var: {
        if (a->pol != b->pol) return false;
        int la = level(as, a->name), lb = level(bs, b->name);
        if (la >= 0 || lb >= 0) return la == lb;
        std::string bn = b->name;
        if (rn) {
          auto it = rn->find(bn);
          if (it != rn->end()) bn = it->second;
        }
        return a->name == bn;
      }
      case TermNode::Kind::App:
        if (a->name != b->name) return false;
        break;
      case TermNode::Kind::Proj:
        if (a->index != b->index) return false;
        break;
      case TermNode::Kind::Pair:
        break;
    }
    for (size_t i = 0; i < a->args.size(); ++i)
      if (!term(a->args[i], b->args[i])) return false;
    return true;
  }

  bool form(const Form& a, const Form& b) {
    if (a->kind != b->kind) return false;
    switch (a->kind) {
      case FormulaNode::Kind::Top:
        return true;
      case FormulaNode::Kind::Hom:
        if (!cat_equal(a->cat, b->cat)) return false;
        return term(a->terms[0], b->terms[0]) && term(a->terms[1], b->terms[1]);
      case FormulaNode::Kind::Atom:
        if (a->name != b->name || a->terms.size() != b->terms.size()) return false;
        for (size_t i = 0; i < a->terms.size(); ++i)
          if (!term(a->terms[i], b->terms[i])) return false;
        return true;
      case FormulaNode::Kind::And:
      case FormulaNode::Kind::Imp:
        return form(a->left, b->left) && form(a->right, b->right);
      case FormulaNode::Kind::End:
      case FormulaNode::Kind::Coend: {
        if (!cat_equal(a->cat, b->cat)) return false;
        as.push_back(a->name);
        bs.push_back(b->name);
        bool r = form(a->left, b->left);
        as.pop_back();
        bs.pop_back();
        return r;
      }
    }
    return false;
  }
};

}  // namespace

bool alpha_equal(const Form& a, const Form& b) {
  AlphaCmp c{{}, {}, nullptr};
  return c.form(a, b);
}

bool alpha_equal(const Form& a, const Form& b, const Renaming& rn) {
  AlphaCmp c{{}, {}, &rn};
  return c.form(a, b);
}

bool sequent_equal(const Sequent& a, const Sequent& b) {
  if (a.ctx.size() != b.ctx.size() || a.hyps.size() != b.hyps.size()) return false;
  Renaming rn;
  for (size_t i = 0; i < a.ctx.size(); ++i) {
    if (!cat_equal(a.ctx[i].cat, b.ctx[i].cat)) return false;
    rn[b.ctx[i].name] = a.ctx[i].name;
  }
  for (size_t i = 0; i < a.hyps.size(); ++i)
    if (!alpha_equal(a.hyps[i].form, b.hyps[i].form, rn)) return false;
  return alpha_equal(a.goal, b.goal, rn);
}

}  // namespace dinat
