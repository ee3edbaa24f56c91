#include <set>

#include "dinat/error.hpp"
#include "dinat/kernel.hpp"

namespace dinat {

namespace {

void subformulas(const Form& f, std::vector<Form>& out) {
  if (!f) return;
  out.push_back(f);
  subformulas(f->left, out);
  subformulas(f->right, out);
}

struct Searcher {
  const Signature& sig;
  SearchStats* stats;
  std::set<std::pair<std::string, int>> failed;

  std::set<std::string> ctx_names(const Sequent& s) {
    std::set<std::string> out;
    for (auto& c : s.ctx) out.insert(c.name);
    return out;
  }
  std::set<std::string> labels(const Sequent& s) {
    std::set<std::string> out;
    for (auto& h : s.hyps) out.insert(h.label);
    return out;
  }

  // Node is kept only if the kernel accepts it.
  std::optional<Deriv> accept(Rule r, std::vector<std::string> names, std::vector<Deriv> kids, const Sequent& c) {
    Deriv d = make_deriv(r, std::move(names), std::move(kids), c);
    try {
      check(d, sig);
      return d;
    } catch (const Error&) {
      return std::nullopt;
    }
  }

  // Subformulas of the sequent that are well-formed in its context.
  std::vector<Form> pool(const Sequent& s) {
    std::vector<Form> all;
    for (auto& h : s.hyps) subformulas(h.form, all);
    subformulas(s.goal, all);
    std::set<std::string> names = ctx_names(s), seen;
    std::vector<Form> out;
    for (auto& f : all) {
      bool closed = true;
      for (auto& v : free_vars(f))
        if (!names.count(v)) closed = false;
      if (closed && seen.insert(to_string(f)).second) out.push_back(f);
    }
    return out;
  }

  std::optional<Deriv> one(Rule r, std::vector<std::string> names, const Sequent& premise, const Sequent& c,
                           int depth) {
    try {
      check_sequent(premise, sig);
    } catch (const Error&) {
      return std::nullopt;
    }
    auto k = go(premise, depth - 1);
    if (!k) return std::nullopt;
    return accept(r, std::move(names), {*k}, c);
  }

  std::optional<Deriv> go(const Sequent& s, int depth) {
    if (stats) ++stats->nodes;
    for (Rule r : {Rule::Id, Rule::Refl, Rule::TopIntro})
      if (auto d = accept(r, {}, {}, s)) return d;
    if (depth <= 0) return std::nullopt;
    auto key = std::make_pair(to_string(s), depth);
    if (failed.count(key)) return std::nullopt;
    auto found = [&]() -> std::optional<Deriv> {
      const Form& g = s.goal;
      if (g->kind == FormulaNode::Kind::And) {
        Sequent a = s, b = s;
        a.goal = g->left;
        b.goal = g->right;
        if (auto da = go(a, depth - 1))
          if (auto db = go(b, depth - 1))
            if (auto d = accept(Rule::Pair, {}, {*da, *db}, s)) return d;
      }
      if (g->kind == FormulaNode::Kind::Imp) {
        Sequent p = s;
        std::string l = fresh_name("h", labels(s));
        p.hyps.push_back({l, flip_form(g->left)});
        p.goal = g->right;
        if (auto d = one(Rule::Curry, {l}, p, s, depth)) return d;
      }
      if (g->kind == FormulaNode::Kind::End) {
        Sequent p = s;
        std::string x = fresh_name(g->name, ctx_names(s));
        p.ctx.push_back({x, g->cat});
        p.goal = substitute(g->left, g->name, var(x));
        if (auto d = one(Rule::EndIntro, {x}, p, s, depth)) return d;
      }
      for (auto& h : s.hyps) {
        if (h.form->kind == FormulaNode::Kind::Hom && !hom_elim_violation_safe(s, h.label)) {
          if (auto d = one(Rule::J, {h.label}, contract(s, h.label), s, depth)) return d;
        }
        Sequent w = s;
        w.hyps.erase(w.hyps.begin() + s.hyp_index(h.label));
        if (auto d = one(Rule::Weaken, {h.label}, w, s, depth)) return d;
        Sequent u = w;
        u.goal = imp(flip_form(h.form), s.goal);
        if (auto d = one(Rule::Uncurry, {h.label}, u, s, depth)) return d;
      }
      if (s.hyps.size() == 1 && s.hyps[0].form->kind == FormulaNode::Kind::Coend) {
        const Form& c = s.hyps[0].form;
        Sequent p = s;
        std::string x = fresh_name(c->name, ctx_names(s));
        p.ctx.push_back({x, c->cat});
        p.hyps = {{s.hyps[0].label, substitute(c->left, c->name, var(x))}};
        if (auto d = one(Rule::CoendIntro, {x}, p, s, depth)) return d;
      }
      for (size_t i = 0; i < s.ctx.size(); ++i) {
        const std::string& x = s.ctx[i].name;
        Sequent p = s;
        p.ctx.erase(p.ctx.begin() + static_cast<long>(i));
        bool hyps_free = true;
        for (auto& h : s.hyps)
          if (mentions(h.form, x)) hyps_free = false;
        if (hyps_free) {
          Sequent e = p;
          e.goal = end_(x, s.ctx[i].cat, s.goal);
          if (auto d = one(Rule::EndElim, {x}, e, s, depth)) return d;
        }
        if (!mentions(s.goal, x)) {
          Sequent c = p;
          std::string l = s.hyps.size() == 1 ? s.hyps[0].label : "c";
          c.hyps = {{l, coend(x, s.ctx[i].cat, pack(s.hyp_forms()))}};
          if (auto d = one(Rule::CoendElim, {x}, c, s, depth)) return d;
        }
        if (i + 1 < s.ctx.size()) {
          Sequent x2 = s;
          std::swap(x2.ctx[i], x2.ctx[i + 1]);
          if (auto d = one(Rule::Exchange, {x2.ctx[i].name, x2.ctx[i + 1].name}, x2, s, depth)) return d;
        }
      }
      for (auto& b : pool(s)) {
        Sequent p = s;
        p.goal = conj(s.goal, b);
        if (auto d = one(Rule::Proj1, {}, p, s, depth)) return d;
        p.goal = conj(b, s.goal);
        if (auto d = one(Rule::Proj2, {}, p, s, depth)) return d;
      }
      return std::nullopt;
    }();
    if (!found) failed.insert(key);
    return found;
  }

  bool hom_elim_violation_safe(const Sequent& s, const std::string& e) {
    try {
      return hom_elim_violation(s, e, "").has_value();
    } catch (const Error&) {
      return true;
    }
  }
};

}  // namespace

std::optional<Deriv> bounded_search(const Sequent& goal, const Signature& sig, int depth, SearchStats* stats) {
  Searcher s{sig, stats, {}};
  return s.go(goal, depth);
}

}  // namespace dinat
