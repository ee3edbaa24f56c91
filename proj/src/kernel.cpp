#include "dinat/kernel.hpp"

#include <algorithm>
#include <set>

namespace dinat {

namespace {

struct RuleInfo {
  Rule rule;
  const char* name;
  int arity;
  int min_names, max_names;
  bool macro;
};

const RuleInfo kRules[] = {
    {Rule::Id, "id", 0, 0, 0, false},
    {Rule::Refl, "refl", 0, 0, 0, false},
    {Rule::TopIntro, "top", 0, 0, 0, false},
    {Rule::Premise, "premise", 0, 1, 1, false},
    {Rule::Use, "use", 0, 1, 1, false},
    {Rule::Pair, "pair", 2, 0, 0, false},
    {Rule::Proj1, "fst", 1, 0, 0, false},
    {Rule::Proj2, "snd", 1, 0, 0, false},
    {Rule::Weaken, "weaken", 1, 1, 1, false},
    {Rule::Curry, "curry", 1, 1, 64, false},
    {Rule::Uncurry, "uncurry", 1, 1, 64, false},
    {Rule::Reindex, "reindex", 1, 0, 0, false},
    {Rule::J, "J", 1, 1, 1, false},
    {Rule::JInv, "Jinv", 1, 1, 1, false},
    {Rule::JWithEq, "Jeq", 2, 1, 1, false},
    {Rule::EndIntro, "end_intro", 1, 1, 1, false},
    {Rule::EndElim, "end_elim", 1, 1, 1, false},
    {Rule::CoendIntro, "coend_intro", 1, 1, 1, false},
    {Rule::CoendElim, "coend_elim", 1, 1, 1, false},
    {Rule::Exchange, "exchange", 1, 2, 2, false},
    {Rule::PairCtx, "pair_ctx", 1, 3, 3, false},
    {Rule::UnpairCtx, "unpair_ctx", 1, 3, 3, false},
    {Rule::Reorient, "reorient", 1, 1, 1, false},
    {Rule::ImpFunc, "imp_func", 2, 0, 0, false},
    {Rule::Compose, "compose", 2, 1, 1, false},
    {Rule::Yoneda, "yoneda", 1, 0, 0, true},
    {Rule::CoYoneda, "coyoneda", 1, 0, 0, true},
    {Rule::Fubini, "fubini", 1, 0, 0, true},
    {Rule::CoendFrobenius, "coend_frobenius", 1, 2, 2, true},
    {Rule::HomRelAdj, "hom_rel_adj", 1, 1, 1, true},
};

const RuleInfo& info(Rule r) {
  for (auto& i : kRules)
    if (i.rule == r) return i;
  return kRules[0];
}

Error at(const std::string& node, const Error& e) {
  if (!e.node.empty()) return e;
  Error out(e.kind, node, e.message);
  out.var = e.var;
  out.where = e.where;
  return out;
}

[[noreturn]] void schema(const std::string& node, const std::string& msg) {
  throw Error(ErrorKind::SchemaMismatch, node, msg);
}

void expect_same(const std::string& node, const std::string& what, const Sequent& expected, const Sequent& got) {
  if (!sequent_equal(expected, got))
    schema(node, what + " does not match the rule: expected " + to_string(expected) + " but found " + to_string(got));
}

Sequent drop_ctx(Sequent s, int i) {
  s.ctx.erase(s.ctx.begin() + i);
  return s;
}

Sequent with_goal(Sequent s, Form g) {
  s.goal = std::move(g);
  return s;
}

int need_var(const Sequent& s, const std::string& v, const std::string& node) {
  int i = s.ctx_index(v);
  if (i < 0) schema(node, "no context variable " + v + " in " + to_string(s));
  return i;
}

int need_hyp(const Sequent& s, const std::string& l, const std::string& node) {
  int i = s.hyp_index(l);
  if (i < 0) schema(node, "no hypothesis " + l + " in " + to_string(s));
  return i;
}

std::set<std::string> labels_of(const Sequent& s) {
  std::set<std::string> out;
  for (auto& h : s.hyps) out.insert(h.label);
  return out;
}

std::set<std::string> names_of(const Sequent& s) {
  std::set<std::string> out;
  for (auto& c : s.ctx) out.insert(c.name);
  return out;
}

// Splits hyps into the listed ones (in list order) and the rest.
std::pair<std::vector<Form>, std::vector<Hyp>> select(const Sequent& s, const std::vector<std::string>& ls,
                                                      const std::string& node) {
  std::set<std::string> seen;
  std::vector<Form> picked;
  for (auto& l : ls) {
    if (!seen.insert(l).second) schema(node, "label " + l + " listed twice");
    picked.push_back(s.hyps[need_hyp(s, l, node)].form);
  }
  std::vector<Hyp> rest;
  for (auto& h : s.hyps)
    if (!seen.count(h.label)) rest.push_back(h);
  return {picked, rest};
}

void hyps_free_of(const Sequent& s, const std::string& v, const std::string& node) {
  for (auto& h : s.hyps)
    if (mentions(h.form, v)) schema(node, "hypothesis " + h.label + " depends on " + v);
}

std::string hyp_label(const Sequent& c, const std::string& fallback) {
  return c.hyps.size() == 1 ? c.hyps[0].label : fallback;
}

Sequent end_intro_concl(const Sequent& p, const std::string& x, const std::string& node) {
  int i = need_var(p, x, node);
  hyps_free_of(p, x, node);
  Sequent out = drop_ctx(p, i);
  out.goal = end_(x, p.ctx[i].cat, p.goal);
  return out;
}

Sequent coend_intro_concl(const Sequent& p, const std::string& x, const std::string& label,
                          const std::string& node) {
  int i = need_var(p, x, node);
  if (mentions(p.goal, x)) schema(node, "goal depends on " + x);
  Sequent out = drop_ctx(p, i);
  out.hyps = {{label, coend(x, p.ctx[i].cat, pack(p.hyp_forms()))}};
  return out;
}

Sequent curry_concl(const Sequent& p, const std::vector<std::string>& ls, const std::string& node) {
  auto [picked, rest] = select(p, ls, node);
  Sequent out = p;
  out.hyps = rest;
  out.goal = imp(flip_form(pack(picked)), p.goal);
  return out;
}

std::string pos_str(Polarity p) { return p == Polarity::Pos ? "+" : "-"; }

}  // namespace

const char* rule_name(Rule r) { return info(r).name; }

std::optional<Rule> rule_from_name(const std::string& s) {
  for (auto& i : kRules)
    if (s == i.name) return i.rule;
  return std::nullopt;
}

bool is_macro(Rule r) { return info(r).macro; }
int rule_arity(Rule r) { return info(r).arity; }

Deriv make_deriv(Rule r, std::vector<std::string> names, std::vector<Deriv> kids, Sequent concl, Subst subst) {
  auto d = std::make_shared<DerivNode>();
  d->rule = r;
  d->names = std::move(names);
  d->kids = std::move(kids);
  d->concl = std::move(concl);
  d->subst = std::move(subst);
  return d;
}

Sequent rename_ctx(const Sequent& s, const TermCtx& target) {
  if (s.ctx.size() != target.size()) throw Error(ErrorKind::SchemaMismatch, "context length differs");
  Subst sub;
  for (size_t i = 0; i < target.size(); ++i) {
    if (!cat_equal(s.ctx[i].cat, target[i].cat))
      throw Error(ErrorKind::SchemaMismatch, "context category differs at " + target[i].name);
    if (s.ctx[i].name != target[i].name) sub.push_back({s.ctx[i].name, var(target[i].name)});
  }
  Sequent out;
  out.ctx = target;
  for (auto& h : s.hyps) out.hyps.push_back({h.label, substitute(h.form, sub)});
  out.goal = substitute(s.goal, sub);
  return out;
}

// ---- hom elimination ----

HomHyp hom_hyp(const Sequent& s, const std::string& e, const std::string& node) {
  int i = s.hyp_index(e);
  if (i < 0) schema(node, "no hypothesis " + e);
  const Form& f = s.hyps[i].form;
  auto bad = [&]() {
    schema(node, "hypothesis " + e + " is not hom(~a, b) between distinct context variables: " + to_string(f));
  };
  if (f->kind != FormulaNode::Kind::Hom) bad();
  const Term& ta = f->terms[0];
  const Term& tb = f->terms[1];
  if (ta->kind != TermNode::Kind::Var || tb->kind != TermNode::Kind::Var) bad();
  if (ta->pol != Polarity::Neg || tb->pol != Polarity::Pos || ta->name == tb->name) bad();
  int ia = s.ctx_index(ta->name), ib = s.ctx_index(tb->name);
  if (ia < 0 || ib < 0) bad();
  if (!cat_equal(s.ctx[ia].cat, f->cat) || !cat_equal(s.ctx[ib].cat, f->cat))
    schema(node, "endpoints of " + e + " must have category " + to_string(f->cat) +
                     " (reorient opposite-typed variables first)");
  return {i, ta->name, tb->name, f->cat};
}

std::optional<Error> hom_elim_violation(const Sequent& s, const std::string& e, const std::string& node) {
  HomHyp h = hom_hyp(s, e, node);
  struct End_ {
    const std::string& v;
    Polarity in_e;
  };
  End_ ends[2] = {{h.a, Polarity::Neg}, {h.b, Polarity::Pos}};
  for (size_t i = 0; i < s.hyps.size(); ++i) {
    if (static_cast<int>(i) == h.index) continue;
    for (auto& en : ends)
      for (auto& o : occurrences(s.hyps[i].form, en.v))
        if (o.pol * en.in_e != Polarity::Neg)
          return variance_error(node, en.v, s.hyps[i].label + ":" + o.path,
                                "variable " + en.v + " occurs in hypothesis " + s.hyps[i].label + " at " + o.path +
                                    " with polarity " + pos_str(o.pol) + "; eliminating " + e + " requires " +
                                    pos_str(flip(en.in_e)));
  }
  for (auto& en : ends)
    for (auto& o : occurrences(s.goal, en.v))
      if (o.pol * en.in_e != Polarity::Pos)
        return variance_error(node, en.v, "goal:" + o.path,
                              "variable " + en.v + " occurs in the goal at " + o.path + " with polarity " +
                                  pos_str(o.pol) + "; eliminating " + e + " requires " + pos_str(en.in_e));
  return std::nullopt;
}

bool check_hom_elim_side_condition(const Sequent& s, const std::string& a, const std::string& b,
                                   const std::string& e) {
  HomHyp h = hom_hyp(s, e);
  if (h.a != a || h.b != b) throw Error(ErrorKind::SchemaMismatch, "hypothesis " + e + " is not hom(~" + a + ", " + b + ")");
  return !hom_elim_violation(s, e, "").has_value();
}

Sequent contract(const Sequent& s, const std::string& e) {
  HomHyp h = hom_hyp(s, e);
  Subst sub{{h.b, var(h.a)}};
  Sequent out;
  for (auto& c : s.ctx)
    if (c.name != h.b) out.ctx.push_back(c);
  for (size_t i = 0; i < s.hyps.size(); ++i)
    if (static_cast<int>(i) != h.index) out.hyps.push_back({s.hyps[i].label, substitute(s.hyps[i].form, sub)});
  out.goal = substitute(s.goal, sub);
  return out;
}

// ---- composition guard ----

std::optional<Error> compose_violation(const Sequent& outer, const std::string& label, const Sequent& inner_raw,
                                       const std::string& node) {
  int li = outer.hyp_index(label);
  if (li < 0) schema(node, "no hypothesis " + label);
  Sequent inner = rename_ctx(inner_raw, outer.ctx);
  const Form& b = outer.hyps[li].form;
  auto single = [](const std::vector<Form>& fs, const std::string& v) {
    std::set<Polarity> ps;
    for (auto& f : fs)
      for (auto& o : occurrences(f, v)) ps.insert(o.pol);
    return ps.size() <= 1;
  };
  for (auto& c : outer.ctx) {
    if (!mentions(b, c.name)) continue;
    std::vector<Form> in_side = inner.hyp_forms();
    in_side.push_back(b);
    std::vector<Form> out_side = outer.hyp_forms();
    out_side.push_back(outer.goal);
    if (single(in_side, c.name) || single(out_side, c.name)) continue;
    auto occ = occurrences(b, c.name);
    return variance_error(node, c.name, label + ":" + (occ.empty() ? "" : occ[0].path),
                          "plugging into " + label + " is not dinatural-safe in " + c.name +
                              ": both sides use it with mixed variance");
  }
  return std::nullopt;
}

// ---- macros ----

namespace {

Deriv expand_yoneda(const Deriv& d) {
  const Sequent& c = d->concl;
  const std::string node = "yoneda";
  const Form& g = c.goal;
  if (g->kind != FormulaNode::Kind::End || g->left->kind != FormulaNode::Kind::Imp ||
      g->left->left->kind != FormulaNode::Kind::Hom)
    schema(node, "conclusion goal must be end x. hom(a, ~x) => Q");
  const std::string x = g->name;
  const Form& h = g->left->left;
  if (h->terms[0]->kind != TermNode::Kind::Var || h->terms[1]->kind != TermNode::Kind::Var ||
      h->terms[1]->name != x || h->terms[0]->name == x)
    schema(node, "conclusion goal must be end x. hom(a, ~x) => Q");
  const std::string a = h->terms[0]->name;
  need_var(c, a, node);
  std::set<std::string> avoid = names_of(c);
  const std::string xn = fresh_name(x, avoid);
  Form q = substitute(g->left->right, x, var(xn));
  Sequent s1 = c;
  s1.ctx.push_back({xn, g->cat});
  s1.goal = imp(hom(h->cat, var(a), var(xn, Polarity::Neg)), q);
  const std::string e = fresh_name("e", labels_of(c));
  Sequent s2 = c;
  s2.ctx.push_back({xn, g->cat});
  s2.hyps.insert(s2.hyps.begin(), {e, hom(h->cat, var(a, Polarity::Neg), var(xn))});
  s2.goal = q;
  Deriv j = make_deriv(Rule::J, {e}, {d->kids[0]}, s2);
  Deriv cu = make_deriv(Rule::Curry, {e}, {j}, s1);
  return make_deriv(Rule::EndIntro, {xn}, {cu}, c);
}

Deriv expand_coyoneda(const Deriv& d) {
  const Sequent& c = d->concl;
  const std::string node = "coyoneda";
  if (c.hyps.size() != 1) schema(node, "conclusion must have a single coend hypothesis");
  const Form& k = c.hyps[0].form;
  if (k->kind != FormulaNode::Kind::Coend || k->left->kind != FormulaNode::Kind::And ||
      k->left->left->kind != FormulaNode::Kind::Hom)
    schema(node, "hypothesis must be coend x. hom(~x, a) & Q");
  const std::string x = k->name;
  const Form& h = k->left->left;
  if (h->terms[0]->kind != TermNode::Kind::Var || h->terms[1]->kind != TermNode::Kind::Var ||
      h->terms[0]->name != x || h->terms[1]->name == x)
    schema(node, "hypothesis must be coend x. hom(~x, a) & Q");
  const std::string a = h->terms[1]->name;
  int ia = need_var(c, a, node);
  const std::string xn = fresh_name(x, names_of(c));
  Form q = substitute(k->left->right, x, var(xn));
  Sequent s1 = c;
  s1.ctx.insert(s1.ctx.begin() + ia, {xn, k->cat});
  const std::string e = fresh_name("e", labels_of(c));
  const std::string p = fresh_name("p", {e});
  s1.hyps = {{e, hom(h->cat, var(xn, Polarity::Neg), var(a))}, {p, q}};
  Deriv j = make_deriv(Rule::J, {e}, {d->kids[0]}, s1);
  return make_deriv(Rule::CoendIntro, {xn}, {j}, c);
}

Deriv expand_fubini(const Deriv& d) {
  const Sequent& c = d->concl;
  const std::string node = "fubini";
  const Form& g = c.goal;
  if (g->kind != FormulaNode::Kind::End || g->left->kind != FormulaNode::Kind::End)
    schema(node, "conclusion goal must be end y. end x. Q");
  std::set<std::string> avoid = names_of(c);
  const std::string yn = fresh_name(g->name, avoid);
  avoid.insert(yn);
  const std::string xn = fresh_name(g->left->name, avoid);
  Form q = substitute(g->left->left, Subst{{g->name, var(yn)}, {g->left->name, var(xn)}});
  Cat cy = g->cat, cx = g->left->cat;
  Sequent s3 = c, s4 = c, s5 = c, s6 = c;
  s3.ctx.push_back({xn, cx});
  s3.goal = end_(yn, cy, q);
  s4.ctx.push_back({xn, cx});
  s4.ctx.push_back({yn, cy});
  s4.goal = q;
  s5.ctx.push_back({yn, cy});
  s5.ctx.push_back({xn, cx});
  s5.goal = q;
  s6.ctx.push_back({yn, cy});
  s6.goal = end_(xn, cx, q);
  Deriv e1 = make_deriv(Rule::EndElim, {xn}, {d->kids[0]}, s3);
  Deriv e2 = make_deriv(Rule::EndElim, {yn}, {e1}, s4);
  Deriv ex = make_deriv(Rule::Exchange, {xn, yn}, {e2}, s5);
  Deriv i1 = make_deriv(Rule::EndIntro, {xn}, {ex}, s6);
  return make_deriv(Rule::EndIntro, {yn}, {i1}, c);
}

Deriv expand_coend_frobenius(const Deriv& d) {
  const std::string node = "coend_frobenius";
  const std::string& x = d->names[0];
  const std::string& l = d->names[1];
  const Sequent& c = d->concl;
  Deriv sub = d->kids[0];
  Sequent p = sub->concl;
  if (p.ctx_index(x) < 0) {
    // premise shaped [..] k : coend x. P & R |- K: eliminate the coend first
    if (p.hyps.size() != 1 || p.hyps[0].form->kind != FormulaNode::Kind::Coend ||
        p.hyps[0].form->left->kind != FormulaNode::Kind::And)
      schema(node, "premise must bind " + x + " in its context or be a single coend of a conjunction");
    const Form& k = p.hyps[0].form;
    const std::string xn = fresh_name(x, names_of(p));
    if (mentions(k->left->left, k->name)) schema(node, "the distributed conjunct depends on " + k->name);
    Sequent s0 = p;
    s0.ctx.push_back({xn, k->cat});
    const std::string g = fresh_name("g", {l});
    s0.hyps = {{l, k->left->left}, {g, substitute(k->left->right, k->name, var(xn))}};
    sub = make_deriv(Rule::CoendElim, {xn}, {sub}, s0);
    p = s0;
    Sequent s1 = curry_concl(p, {l}, node);
    Deriv cu = make_deriv(Rule::Curry, {l}, {sub}, s1);
    Sequent s2 = coend_intro_concl(s1, xn, fresh_name("c", {l}), node);
    Deriv ci = make_deriv(Rule::CoendIntro, {xn}, {cu}, s2);
    return make_deriv(Rule::Uncurry, {l}, {ci}, c);
  }
  if (p.hyp_index(l) < 0) schema(node, "premise has no hypothesis " + l);
  if (mentions(p.hyps[p.hyp_index(l)].form, x)) schema(node, "hypothesis " + l + " depends on " + x);
  Sequent s1 = curry_concl(p, {l}, node);
  Deriv cu = make_deriv(Rule::Curry, {l}, {sub}, s1);
  std::string cl = "c";
  for (auto& h : c.hyps)
    if (h.label != l) cl = h.label;
  Sequent s2 = coend_intro_concl(s1, x, cl, node);
  Deriv ci = make_deriv(Rule::CoendIntro, {x}, {cu}, s2);
  return make_deriv(Rule::Uncurry, {l}, {ci}, c);
}

Deriv expand_hom_rel_adj(const Deriv& d) {
  const std::string node = "hom_rel_adj";
  const Sequent& c = d->concl;
  HomHyp h = hom_hyp(c, d->names[0], node);
  for (size_t i = 0; i < c.hyps.size(); ++i) {
    if (static_cast<int>(i) == h.index) continue;
    for (auto& v : {h.a, h.b})
      if (mentions(c.hyps[i].form, v))
        schema(node, "context formula " + c.hyps[i].label + " depends on the equality variable " + v);
  }
  return make_deriv(Rule::J, d->names, d->kids, c);
}

}  // namespace

Deriv expand_macro(const Deriv& d, const Signature&) {
  switch (d->rule) {
    case Rule::Yoneda: return expand_yoneda(d);
    case Rule::CoYoneda: return expand_coyoneda(d);
    case Rule::Fubini: return expand_fubini(d);
    case Rule::CoendFrobenius: return expand_coend_frobenius(d);
    case Rule::HomRelAdj: return expand_hom_rel_adj(d);
    default: return d;
  }
}

// ---- checking ----

namespace {

struct Checker {
  const Signature& sig;
  const Defs* defs;
  std::map<std::string, Sequent> premises;
  std::vector<std::string> use_stack;

  Sequent run(const Deriv& d, const std::string& path) {
    const std::string node = path + " (" + rule_name(d->rule) + ")";
    const RuleInfo& ri = info(d->rule);
    if (static_cast<int>(d->kids.size()) != ri.arity)
      schema(node, std::string(ri.name) + " takes " + std::to_string(ri.arity) + " sub-derivations");
    if (static_cast<int>(d->names.size()) < ri.min_names || static_cast<int>(d->names.size()) > ri.max_names)
      schema(node, std::string("wrong number of parameters for ") + ri.name);
    try {
      check_sequent(d->concl, sig);
    } catch (const Error& e) {
      throw at(node, e);
    }
    if (ri.macro) {
      Deriv ex;
      try {
        ex = expand_macro(d, sig);
      } catch (const Error& e) {
        throw at(node, e);
      }
      return run(ex, path + ">");
    }
    std::vector<Sequent> ps;
    for (size_t i = 0; i < d->kids.size(); ++i) ps.push_back(run(d->kids[i], path + "." + std::to_string(i)));
    try {
      rule(d, ps, node);
    } catch (const Error& e) {
      throw at(node, e);
    }
    return d->concl;
  }

  void rule(const Deriv& d, const std::vector<Sequent>& ps, const std::string& node) {
    const Sequent& c = d->concl;
    const auto& n = d->names;
    switch (d->rule) {
      case Rule::Id:
        if (c.hyps.size() != 1 || !alpha_equal(c.hyps[0].form, c.goal))
          schema(node, "id needs exactly one hypothesis equal to the goal");
        return;
      case Rule::Refl: {
        const Form& g = c.goal;
        if (!c.hyps.empty() || g->kind != FormulaNode::Kind::Hom) schema(node, "refl concludes |- hom(~x, x)");
        const Term& s = g->terms[0];
        const Term& t = g->terms[1];
        if (s->kind != TermNode::Kind::Var || t->kind != TermNode::Kind::Var || s->name != t->name ||
            s->pol != Polarity::Neg || t->pol != Polarity::Pos)
          schema(node, "refl concludes |- hom(~x, x)");
        return;
      }
      case Rule::TopIntro:
        if (c.goal->kind != FormulaNode::Kind::Top) schema(node, "top concludes the goal top");
        return;
      case Rule::Premise: {
        auto it = premises.find(n[0]);
        if (it != premises.end() && !sequent_equal(it->second, c))
          schema(node, "premise " + n[0] + " used with two different sequents");
        premises.emplace(n[0], c);
        return;
      }
      case Rule::Use: {
        if (!defs || !defs->count(n[0])) schema(node, "unknown derivation " + n[0]);
        if (std::find(use_stack.begin(), use_stack.end(), n[0]) != use_stack.end())
          schema(node, "cyclic reference to " + n[0]);
        use_stack.push_back(n[0]);
        Sequent s = run(defs->at(n[0]), n[0]);
        use_stack.pop_back();
        expect_same(node, "referenced conclusion", s, c);
        return;
      }
      case Rule::Pair: {
        if (c.goal->kind != FormulaNode::Kind::And) schema(node, "pair concludes a conjunction");
        expect_same(node, "first premise", with_goal(c, c.goal->left), ps[0]);
        expect_same(node, "second premise", with_goal(c, c.goal->right), ps[1]);
        return;
      }
      case Rule::Proj1:
      case Rule::Proj2: {
        const Form& g = ps[0].goal;
        if (g->kind != FormulaNode::Kind::And) schema(node, "projection from a non-conjunction");
        expect_same(node, "conclusion", with_goal(ps[0], d->rule == Rule::Proj1 ? g->left : g->right), c);
        return;
      }
      case Rule::Weaken: {
        int i = need_hyp(c, n[0], node);
        Sequent p = c;
        p.hyps.erase(p.hyps.begin() + i);
        expect_same(node, "premise", p, ps[0]);
        return;
      }
      case Rule::Curry:
        expect_same(node, "conclusion", curry_concl(ps[0], n, node), c);
        return;
      case Rule::Uncurry: {
        auto [picked, rest] = select(c, n, node);
        Sequent p = c;
        p.hyps = rest;
        p.goal = imp(flip_form(pack(picked)), c.goal);
        expect_same(node, "premise", p, ps[0]);
        return;
      }
      case Rule::Reindex: {
        const Sequent& p = ps[0];
        Subst sub;
        for (auto& [v, t] : d->subst)
          if (p.ctx_index(v) < 0) schema(node, "reindex assigns " + v + ", which the premise does not bind");
        for (auto& e : p.ctx) {
          Term t;
          for (auto& [v, u] : d->subst)
            if (v == e.name) t = u;
          if (!t) {
            int j = c.ctx_index(e.name);
            if (j < 0 || !cat_equal(c.ctx[j].cat, e.cat)) schema(node, "reindex leaves " + e.name + " unassigned");
            t = var(e.name);
          }
          check_term(t, e.cat, Polarity::Pos, c.ctx, sig);
          sub.push_back({e.name, t});
        }
        Sequent ex;
        ex.ctx = c.ctx;
        for (auto& h : p.hyps) ex.hyps.push_back({h.label, substitute(h.form, sub)});
        ex.goal = substitute(p.goal, sub);
        expect_same(node, "conclusion", ex, c);
        return;
      }
      case Rule::J: {
        if (auto v = hom_elim_violation(c, n[0], node)) throw *v;
        expect_same(node, "premise", contract(c, n[0]), ps[0]);
        return;
      }
      case Rule::JInv: {
        if (auto v = hom_elim_violation(ps[0], n[0], node)) throw *v;
        expect_same(node, "conclusion", contract(ps[0], n[0]), c);
        return;
      }
      case Rule::JWithEq: {
        Sequent eq = rename_ctx(ps[1], c.ctx);
        if (eq.hyps.size() != c.hyps.size()) schema(node, "equality premise must share the hypotheses");
        for (size_t i = 0; i < c.hyps.size(); ++i)
          if (!alpha_equal(c.hyps[i].form, eq.hyps[i].form)) schema(node, "equality premise must share the hypotheses");
        if (c.hyp_index(n[0]) >= 0) schema(node, "label " + n[0] + " already in use");
        Sequent jf = c;
        jf.hyps.insert(jf.hyps.begin(), {n[0], eq.goal});
        if (auto v = hom_elim_violation(jf, n[0], node)) throw *v;
        expect_same(node, "first premise", contract(jf, n[0]), ps[0]);
        return;
      }
      case Rule::EndIntro:
        expect_same(node, "conclusion", end_intro_concl(ps[0], n[0], node), c);
        return;
      case Rule::EndElim: {
        int i = need_var(c, n[0], node);
        hyps_free_of(c, n[0], node);
        Sequent p = drop_ctx(c, i);
        p.goal = end_(n[0], c.ctx[i].cat, c.goal);
        expect_same(node, "premise", p, ps[0]);
        return;
      }
      case Rule::CoendIntro:
        expect_same(node, "conclusion", coend_intro_concl(ps[0], n[0], hyp_label(c, "c"), node), c);
        return;
      case Rule::CoendElim: {
        int i = need_var(c, n[0], node);
        if (mentions(c.goal, n[0])) schema(node, "goal depends on " + n[0]);
        Sequent p = drop_ctx(c, i);
        p.hyps = {{hyp_label(ps[0], "c"), coend(n[0], c.ctx[i].cat, pack(c.hyp_forms()))}};
        expect_same(node, "premise", p, ps[0]);
        return;
      }
      case Rule::Exchange: {
        int i = need_var(ps[0], n[0], node);
        if (i + 1 >= static_cast<int>(ps[0].ctx.size()) || ps[0].ctx[i + 1].name != n[1])
          schema(node, n[0] + " and " + n[1] + " are not adjacent");
        Sequent ex = ps[0];
        std::swap(ex.ctx[i], ex.ctx[i + 1]);
        expect_same(node, "conclusion", ex, c);
        return;
      }
      case Rule::PairCtx: {
        const Sequent& p = ps[0];
        int i = need_var(p, n[1], node);
        if (i + 1 >= static_cast<int>(p.ctx.size()) || p.ctx[i + 1].name != n[2])
          schema(node, n[1] + " and " + n[2] + " are not adjacent");
        for (auto& e : p.ctx)
          if (e.name == n[0] && e.name != n[1] && e.name != n[2]) schema(node, n[0] + " already bound");
        Subst sub{{n[1], proj(1, var(n[0]))}, {n[2], proj(2, var(n[0]))}};
        Sequent ex;
        ex.ctx = p.ctx;
        ex.ctx[i] = {n[0], cat_prod(p.ctx[i].cat, p.ctx[i + 1].cat)};
        ex.ctx.erase(ex.ctx.begin() + i + 1);
        for (auto& h : p.hyps) ex.hyps.push_back({h.label, substitute(h.form, sub)});
        ex.goal = substitute(p.goal, sub);
        expect_same(node, "conclusion", ex, c);
        return;
      }
      case Rule::UnpairCtx: {
        const Sequent& p = ps[0];
        int i = need_var(p, n[0], node);
        const Cat& pc = p.ctx[i].cat;
        if (pc->kind != CatNode::Kind::Prod) schema(node, n[0] + " does not have a product category");
        for (auto& e : p.ctx)
          if ((e.name == n[1] || e.name == n[2]) && e.name != n[0]) schema(node, e.name + " already bound");
        if (n[1] == n[2]) schema(node, "components need distinct names");
        Subst sub{{n[0], pair(var(n[1]), var(n[2]))}};
        Sequent ex;
        ex.ctx = p.ctx;
        ex.ctx[i] = {n[1], pc->left};
        ex.ctx.insert(ex.ctx.begin() + i + 1, {n[2], pc->right});
        for (auto& h : p.hyps) ex.hyps.push_back({h.label, substitute(h.form, sub)});
        ex.goal = substitute(p.goal, sub);
        expect_same(node, "conclusion", ex, c);
        return;
      }
      case Rule::Reorient: {
        const Sequent& p = ps[0];
        int i = need_var(p, n[0], node);
        Subst sub{{n[0], var(n[0], Polarity::Neg)}};
        Sequent ex;
        ex.ctx = p.ctx;
        ex.ctx[i].cat = normalize(cat_op(p.ctx[i].cat));
        for (auto& h : p.hyps) ex.hyps.push_back({h.label, substitute(h.form, sub)});
        ex.goal = substitute(p.goal, sub);
        expect_same(node, "conclusion", ex, c);
        return;
      }
      case Rule::ImpFunc: {
        const Sequent& p = ps[0];
        Sequent q = rename_ctx(ps[1], p.ctx);
        if (p.hyps.size() != 1 || q.hyps.size() != 1) schema(node, "imp_func premises take one hypothesis each");
        Sequent ex;
        ex.ctx = p.ctx;
        ex.hyps = {{hyp_label(c, "h"), imp(flip_form(p.goal), q.hyps[0].form)}};
        ex.goal = imp(flip_form(p.hyps[0].form), q.goal);
        expect_same(node, "conclusion", ex, c);
        return;
      }
      case Rule::Compose: {
        const Sequent& o = ps[0];
        Sequent in = rename_ctx(ps[1], o.ctx);
        int li = need_hyp(o, n[0], node);
        if (!alpha_equal(o.hyps[li].form, in.goal))
          schema(node, "plugged derivation concludes " + to_string(in.goal) + ", hypothesis " + n[0] + " is " +
                           to_string(o.hyps[li].form));
        if (auto v = compose_violation(o, n[0], in, node)) throw *v;
        Sequent ex = o;
        ex.hyps.erase(ex.hyps.begin() + li);
        ex.hyps.insert(ex.hyps.begin() + li, in.hyps.begin(), in.hyps.end());
        expect_same(node, "conclusion", ex, c);
        return;
      }
      default:
        schema(node, "unexpected rule");
    }
  }
};

}  // namespace

CheckResult check(const Deriv& d, const Signature& sig, const Defs* defs) {
  Checker ch{sig, defs, {}, {}};
  Sequent s = ch.run(d, "root");
  return {s, ch.premises};
}

Sequent check_derivation(const Deriv& d, const Signature& sig, const Defs* defs) {
  return check(d, sig, defs).concl;
}

// ---- rewriting ----

Deriv expand_all(const Deriv& d, const Signature& sig, const Defs* defs) {
  if (d->rule == Rule::Use) {
    if (!defs || !defs->count(d->names[0])) throw Error(ErrorKind::SchemaMismatch, "unknown derivation " + d->names[0]);
    return expand_all(defs->at(d->names[0]), sig, defs);
  }
  if (is_macro(d->rule)) return expand_all(expand_macro(d, sig), sig, defs);
  auto n = std::make_shared<DerivNode>(*d);
  for (auto& k : n->kids) k = expand_all(k, sig, defs);
  return n;
}

static Deriv jcomp_rewrite(const Deriv& d) {
  auto n = std::make_shared<DerivNode>(*d);
  for (auto& k : n->kids) k = jcomp_rewrite(k);
  if (n->rule == Rule::JInv && n->kids[0]->rule == Rule::J && n->kids[0]->names[0] == n->names[0])
    return n->kids[0]->kids[0];
  return n;
}

Deriv jcomp_normalize(const Deriv& d, const Signature& sig, const Defs* defs) {
  return jcomp_rewrite(expand_all(d, sig, defs));
}

bool deriv_equal(const Deriv& a, const Deriv& b) {
  if (a->rule != b->rule || a->names != b->names || a->kids.size() != b->kids.size() ||
      a->subst.size() != b->subst.size())
    return false;
  for (size_t i = 0; i < a->subst.size(); ++i)
    if (a->subst[i].first != b->subst[i].first || !term_equal(a->subst[i].second, b->subst[i].second)) return false;
  if (!sequent_equal(a->concl, b->concl)) return false;
  for (size_t i = 0; i < a->kids.size(); ++i)
    if (!deriv_equal(a->kids[i], b->kids[i])) return false;
  return true;
}

std::vector<EqJudgement> check_eq_judgement(const EqJudgement& j, const Signature& sig, const Defs* defs) {
  const std::string node = "obligation " + j.name;
  Sequent sl = check_derivation(j.lhs, sig, defs);
  Sequent sr = check_derivation(j.rhs, sig, defs);
  if (!sequent_equal(sl, sr))
    schema(node, "sides conclude different sequents: " + to_string(sl) + " and " + to_string(sr));
  Deriv l = jcomp_normalize(j.lhs, sig, defs);
  Deriv r = jcomp_normalize(j.rhs, sig, defs);
  if (deriv_equal(l, r)) return {};
  if (j.strategy == EqStrategy::Direct) return {j};
  if (auto v = hom_elim_violation(sl, j.label, node)) throw *v;
  Sequent c = contract(sl, j.label);
  Deriv nl = jcomp_rewrite(make_deriv(Rule::JInv, {j.label}, {l}, c));
  Deriv nr = jcomp_rewrite(make_deriv(Rule::JInv, {j.label}, {r}, rename_ctx(c, c.ctx)));
  if (deriv_equal(nl, nr)) return {};
  EqJudgement out;
  out.name = j.name + "/" + j.label + ":=refl";
  out.lhs = nl;
  out.rhs = nr;
  out.strategy = EqStrategy::Direct;
  return {out};
}

}  // namespace dinat
