#include <algorithm>
#include <cstdlib>
#include <numeric>
#include <optional>

#include "dinat/finsem.hpp"

namespace dinat {

namespace {

std::optional<size_t> g_max_set;

[[noreturn]] void too_big(size_t need) {
  throw Error(ErrorKind::BoundExceeded, "a set of " + std::to_string(need) + " elements exceeds the bound of " +
                                            std::to_string(max_set_size()));
}

// Saturating product.
size_t mul(size_t a, size_t b) {
  if (a == 0 || b == 0) return 0;
  if (a > SIZE_MAX / b) return SIZE_MAX;
  return a * b;
}

}  // namespace

size_t max_set_size() {
  if (g_max_set) return *g_max_set;
  if (const char* e = std::getenv("DINAT_MAX_SET_SIZE")) {
    char* end = nullptr;
    unsigned long long v = std::strtoull(e, &end, 10);
    if (end != e && *end == 0 && v > 0) return static_cast<size_t>(v);
  }
  return 1'000'000;
}

void set_max_set_size(size_t n) { g_max_set = n; }

Point diagonal(const std::vector<int>& objs) {
  Point p;
  for (int o : objs) p.push_back({o, o});
  return p;
}

Value pack_value(const std::vector<Value>& vs) {
  if (vs.empty()) return Value::tuple({});
  Value acc = vs.back();
  for (size_t i = vs.size() - 1; i-- > 0;) acc = Value::tuple({vs[i], acc});
  return acc;
}

std::vector<Value> unpack_value(const Value& v, size_t n) {
  std::vector<Value> out;
  if (n == 0) return out;
  Value cur = v;
  for (size_t i = 0; i + 1 < n; ++i) {
    out.push_back(cur[0]);
    cur = cur[1];
  }
  out.push_back(cur);
  return out;
}

// ---- compiled formulas ----

namespace {

struct CTerm {
  TermNode::Kind kind = TermNode::Kind::Var;
  int var = -1;
  Polarity pol = Polarity::Pos;
  const FunctorTable* fun = nullptr;
  int n2 = 1, m2 = 1;  // Pair: sizes of the right factor; Proj: same for the argument
  int index = 0;
  std::vector<CTerm> args;
};

int tobj(const CTerm& t, const Point& pt) {
  switch (t.kind) {
    case TermNode::Kind::Var:
      return t.pol == Polarity::Pos ? pt[t.var].second : pt[t.var].first;
    case TermNode::Kind::App:
      return t.fun->obj[tobj(t.args[0], pt)];
    case TermNode::Kind::Pair:
      return tobj(t.args[0], pt) * t.n2 + tobj(t.args[1], pt);
    case TermNode::Kind::Proj: {
      int o = tobj(t.args[0], pt);
      return t.index == 1 ? o / t.n2 : o % t.n2;
    }
  }
  return 0;
}

int tmor(const CTerm& t, const MorPoint& m) {
  switch (t.kind) {
    case TermNode::Kind::Var:
      return t.pol == Polarity::Pos ? m[t.var].second : m[t.var].first;
    case TermNode::Kind::App:
      return t.fun->mor[tmor(t.args[0], m)];
    case TermNode::Kind::Pair:
      return tmor(t.args[0], m) * t.m2 + tmor(t.args[1], m);
    case TermNode::Kind::Proj: {
      int o = tmor(t.args[0], m);
      return t.index == 1 ? o / t.m2 : o % t.m2;
    }
  }
  return 0;
}

struct CForm {
  FormulaNode::Kind kind = FormulaNode::Kind::Top;
  std::vector<CTerm> terms;
  const FinCat* cat = nullptr;  // Hom category or binder category
  const AtomTable* atom = nullptr;
  std::vector<int> rad_obj, rad_mor;  // atom slot sizes
  const CForm* left = nullptr;
  const CForm* right = nullptr;
  std::vector<int> free;                  // env indices the node depends on
  std::vector<const FinCat*> env_cats;    // enclosing environment
};

struct SetInfo {
  FinSet set;
  std::vector<std::vector<int>> rep;  // coend: per object, body element -> class
};

Point swapped(const Point& p) {
  Point q = p;
  for (auto& [a, b] : q) std::swap(a, b);
  return q;
}

MorPoint swapped_mor(const MorPoint& m) { return swapped(m); }

}  // namespace

struct Evaluator::Impl {
  const Model& model;
  const Signature& sig;
  std::vector<std::unique_ptr<CForm>> forms;
  std::vector<int> roots;
  std::vector<Form> keepalive;
  std::map<std::pair<const FormulaNode*, std::string>, int> compiled;
  std::vector<CTerm> terms;
  std::map<std::pair<const CForm*, std::vector<int>>, SetInfo> memo;

  Impl(const Model& m, const Signature& s) : model(m), sig(s) {}

  const FinCat& tcat(const Term& t, const TypeEnv& env) { return model.cat(normalize(infer_term(t, env, sig))); }

  CTerm cterm(const Term& t, const TypeEnv& env) {
    CTerm c;
    c.kind = t->kind;
    switch (t->kind) {
      case TermNode::Kind::Var: {
        c.pol = t->pol;
        for (size_t i = env.size(); i-- > 0;)
          if (env[i].name == t->name) {
            c.var = static_cast<int>(i);
            break;
          }
        if (c.var < 0) throw Error(ErrorKind::UnboundVariable, "unbound variable " + t->name);
        break;
      }
      case TermNode::Kind::App: {
        auto it = model.functors.find(t->name);
        if (it == model.functors.end())
          throw Error(ErrorKind::Model, "model " + model.name + " does not interpret functor " + t->name);
        c.fun = &it->second;
        // arguments as a right-nested pair
        CTerm acc = cterm(t->args.back(), env);
        const FinCat& last = tcat(t->args.back(), env);
        int n = last.nobj(), m = last.nmor();
        for (size_t i = t->args.size() - 1; i-- > 0;) {
          CTerm p;
          p.kind = TermNode::Kind::Pair;
          p.n2 = n;
          p.m2 = m;
          p.args = {cterm(t->args[i], env), acc};
          acc = p;
          const FinCat& ci = tcat(t->args[i], env);
          n *= ci.nobj();
          m *= ci.nmor();
        }
        c.args = {acc};
        break;
      }
      case TermNode::Kind::Pair: {
        const FinCat& r = tcat(t->args[1], env);
        c.n2 = r.nobj();
        c.m2 = r.nmor();
        c.args = {cterm(t->args[0], env), cterm(t->args[1], env)};
        break;
      }
      case TermNode::Kind::Proj: {
        Cat pc = normalize(infer_term(t->args[0], env, sig));
        if (pc->kind != CatNode::Kind::Prod) throw Error(ErrorKind::TypeMismatch, "projection from a non-product");
        const FinCat& r = model.cat(pc->right);
        c.n2 = r.nobj();
        c.m2 = r.nmor();
        c.index = t->index;
        c.args = {cterm(t->args[0], env)};
        break;
      }
    }
    return c;
  }

  static void term_vars(const CTerm& t, std::vector<int>& out) {
    if (t.kind == TermNode::Kind::Var) out.push_back(t.var);
    for (auto& a : t.args) term_vars(a, out);
  }

  const CForm* cform(const Form& f, const TypeEnv& env, const std::vector<const FinCat*>& cats) {
    auto c = std::make_unique<CForm>();
    c->kind = f->kind;
    std::vector<int> fv;
    switch (f->kind) {
      case FormulaNode::Kind::Top:
        break;
      case FormulaNode::Kind::Hom:
        c->cat = &model.cat(normalize(f->cat));
        for (auto& t : f->terms) c->terms.push_back(cterm(t, env));
        break;
      case FormulaNode::Kind::Atom: {
        auto it = model.atoms.find(f->name);
        if (it == model.atoms.end())
          throw Error(ErrorKind::Model, "model " + model.name + " does not interpret atom " + f->name);
        c->atom = &it->second;
        if (c->atom->slots.size() != f->terms.size())
          throw Error(ErrorKind::ArityMismatch, "atom " + f->name + " applied to the wrong number of arguments");
        for (size_t i = 0; i < f->terms.size(); ++i) {
          c->terms.push_back(cterm(f->terms[i], env));
          const FinCat& sc = model.cat(c->atom->slots[i].cat);
          c->rad_obj.push_back(sc.nobj());
          c->rad_mor.push_back(sc.nmor());
        }
        break;
      }
      case FormulaNode::Kind::And:
        c->left = cform(f->left, env, cats);
        c->right = cform(f->right, env, cats);
        break;
      case FormulaNode::Kind::Imp:
        c->left = cform(flip_form(f->left), env, cats);
        c->right = cform(f->right, env, cats);
        break;
      case FormulaNode::Kind::End:
      case FormulaNode::Kind::Coend: {
        c->cat = &model.cat(normalize(f->cat));
        c->env_cats = cats;
        TypeEnv inner = env;
        inner.push_back({f->name, f->cat});
        auto icats = cats;
        icats.push_back(c->cat);
        c->left = cform(f->left, inner, icats);
        break;
      }
    }
    for (auto& t : c->terms) term_vars(t, fv);
    int depth = static_cast<int>(env.size());
    for (const CForm* k : {c->left, c->right})
      if (k)
        for (int v : k->free)
          if (v < depth) fv.push_back(v);
    std::sort(fv.begin(), fv.end());
    fv.erase(std::unique(fv.begin(), fv.end()), fv.end());
    c->free = fv;
    forms.push_back(std::move(c));
    return forms.back().get();
  }

  MorPoint ident(const std::vector<const FinCat*>& cats, const Point& pt) {
    MorPoint m(pt.size());
    for (size_t i = 0; i < pt.size(); ++i)
      m[i] = {cats[i]->identity[pt[i].first], cats[i]->identity[pt[i].second]};
    return m;
  }

  const SetInfo& info(const CForm* f, const Point& pt) {
    std::vector<int> key;
    key.reserve(f->free.size() * 2);
    for (int v : f->free) {
      key.push_back(pt[v].first);
      key.push_back(pt[v].second);
    }
    auto k = std::make_pair(f, std::move(key));
    auto it = memo.find(k);
    if (it != memo.end()) return it->second;
    SetInfo si = compute(f, pt);
    return memo.emplace(std::move(k), std::move(si)).first->second;
  }

  std::pair<int, int> atom_index(const CForm* f, const Point* pt, const MorPoint* m) {
    int o = 0, mo = 0;
    for (size_t i = 0; i < f->terms.size(); ++i) {
      if (pt) o = o * f->rad_obj[i] + tobj(f->terms[i], *pt);
      if (m) mo = mo * f->rad_mor[i] + tmor(f->terms[i], *m);
    }
    return {o, mo};
  }

  SetInfo compute(const CForm* f, const Point& pt) {
    SetInfo si;
    auto& out = si.set.elems;
    switch (f->kind) {
      case FormulaNode::Kind::Top:
        out.push_back(Value::tuple({}));
        break;
      case FormulaNode::Kind::Hom:
        si.set = f->cat->hom(tobj(f->terms[0], pt), tobj(f->terms[1], pt));
        break;
      case FormulaNode::Kind::Atom:
        si.set = f->atom->fun.sets[atom_index(f, &pt, nullptr).first];
        break;
      case FormulaNode::Kind::And: {
        const FinSet& l = info(f->left, pt).set;
        const FinSet& r = info(f->right, pt).set;
        size_t n = mul(l.size(), r.size());
        if (n > max_set_size()) too_big(n);
        out.reserve(n);
        for (auto& a : l.elems)
          for (auto& b : r.elems) out.push_back(Value::tuple({a, b}));
        break;
      }
      case FormulaNode::Kind::Imp: {
        const FinSet l = info(f->left, swapped(pt)).set;
        const FinSet& r = info(f->right, pt).set;
        size_t n = 1;
        for (size_t i = 0; i < l.size(); ++i) n = mul(n, r.size());
        if (n > max_set_size()) too_big(n);
        if (n == 0) break;
        out.reserve(n);
        std::vector<size_t> idx(l.size(), 0);
        for (;;) {
          std::vector<Value> outs;
          outs.reserve(l.size());
          for (size_t i : idx) outs.push_back(r.elems[i]);
          out.push_back(Value::func(std::move(outs)));
          size_t j = idx.size();
          while (j > 0 && ++idx[j - 1] == r.size()) idx[--j] = 0;
          if (j == 0) break;
        }
        break;
      }
      case FormulaNode::Kind::End:
        end_set(f, pt, si);
        break;
      case FormulaNode::Kind::Coend:
        coend_set(f, pt, si);
        break;
    }
    return si;
  }

  Value act(const CForm* f, const Point& a, const Point& b, const MorPoint& m, const Value& x) {
    switch (f->kind) {
      case FormulaNode::Kind::Top:
        return x;
      case FormulaNode::Kind::Hom: {
        const FinCat& c = *f->cat;
        int g = c.mor_index(x);
        if (g < 0) throw Error(ErrorKind::Soundness, "element " + x.to_string() + " is not a morphism");
        int u = tmor(f->terms[0], m), v = tmor(f->terms[1], m);
        return c.mors[c.compose(c.compose(u, g), v)].name;
      }
      case FormulaNode::Kind::Atom: {
        auto [o, mo] = atom_index(f, &a, &m);
        const SetFunctor& fun = f->atom->fun;
        int i = fun.sets[o].index_of(x);
        if (i < 0) throw Error(ErrorKind::Soundness, "element " + x.to_string() + " not in its atom set");
        int dst = atom_index(f, &b, nullptr).first;
        return fun.sets[dst].elems[fun.maps[mo][i]];
      }
      case FormulaNode::Kind::And:
        return Value::tuple({act(f->left, a, b, m, x[0]), act(f->right, a, b, m, x[1])});
      case FormulaNode::Kind::Imp: {
        Point sa = swapped(a), sb = swapped(b);
        MorPoint sm = swapped_mor(m);
        const FinSet la = info(f->left, sa).set;
        const FinSet lb = info(f->left, sb).set;
        std::vector<Value> outs;
        outs.reserve(lb.size());
        for (auto& l : lb.elems) {
          int i = la.index_of(act(f->left, sb, sa, sm, l));
          if (i < 0) throw Error(ErrorKind::Soundness, "action left its set");
          outs.push_back(act(f->right, a, b, m, x[i]));
        }
        return Value::func(std::move(outs));
      }
      case FormulaNode::Kind::End: {
        const FinCat& c = *f->cat;
        Point qa = a, qb = b;
        MorPoint qm = m;
        qa.push_back({0, 0});
        qb.push_back({0, 0});
        qm.push_back({0, 0});
        std::vector<Value> outs;
        for (int o = 0; o < c.nobj(); ++o) {
          qa.back() = qb.back() = {o, o};
          qm.back() = {c.identity[o], c.identity[o]};
          outs.push_back(act(f->left, qa, qb, qm, x[o]));
        }
        return Value::tuple(std::move(outs));
      }
      case FormulaNode::Kind::Coend: {
        const FinCat& c = *f->cat;
        int o = c.obj_index(x[0]);
        Point qa = a, qb = b;
        MorPoint qm = m;
        qa.push_back({o, o});
        qb.push_back({o, o});
        qm.push_back({c.identity[o], c.identity[o]});
        Value y = act(f->left, qa, qb, qm, x[1]);
        int i = info(f->left, qb).set.index_of(y);
        const SetInfo& tgt = info(f, b);
        return tgt.set.elems[tgt.rep[o][i]];
      }
    }
    return x;
  }

  void end_set(const CForm* f, const Point& pt, SetInfo& si) {
    const FinCat& c = *f->cat;
    int n = c.nobj();
    Point q = pt;
    q.push_back({0, 0});
    std::vector<FinSet> s(n);
    for (int o = 0; o < n; ++o) {
      q.back() = {o, o};
      s[o] = info(f->left, q).set;
    }
    MorPoint m = ident(f->env_cats, pt);
    m.push_back({0, 0});
    struct Con {
      int a, b;
      std::vector<int> ma, mb;
    };
    std::vector<std::vector<Con>> cons(n);
    for (int g = 0; g < c.nmor(); ++g) {
      if (c.is_identity(g)) continue;
      int a = c.mors[g].src, b = c.mors[g].dst;
      Point pa = pt, pb = pt, pab = pt;
      pa.push_back({a, a});
      pb.push_back({b, b});
      pab.push_back({a, b});
      const FinSet& tgt = info(f->left, pab).set;
      Con k{a, b, {}, {}};
      m.back() = {c.identity[a], g};
      for (auto& t : s[a].elems) k.ma.push_back(tgt.index_of(act(f->left, pa, pab, m, t)));
      m.back() = {g, c.identity[b]};
      for (auto& t : s[b].elems) k.mb.push_back(tgt.index_of(act(f->left, pb, pab, m, t)));
      cons[std::max(a, b)].push_back(std::move(k));
    }
    std::vector<int> pick(n, 0);
    long nodes = 0;
    size_t bound = max_set_size();
    auto rec = [&](auto& self, int o) -> void {
      if (o == n) {
        std::vector<Value> t;
        t.reserve(n);
        for (int i = 0; i < n; ++i) t.push_back(s[i].elems[pick[i]]);
        si.set.elems.push_back(Value::tuple(std::move(t)));
        if (si.set.size() > bound) too_big(si.set.size());
        return;
      }
      for (size_t i = 0; i < s[o].size(); ++i) {
        if (++nodes > 50'000'000) throw Error(ErrorKind::BoundExceeded, "end enumeration exceeds the node limit");
        pick[o] = static_cast<int>(i);
        bool ok = true;
        for (auto& k : cons[o])
          if (k.ma[pick[k.a]] != k.mb[pick[k.b]]) {
            ok = false;
            break;
          }
        if (ok) self(self, o + 1);
      }
    };
    rec(rec, 0);
  }

  void coend_set(const CForm* f, const Point& pt, SetInfo& si) {
    const FinCat& c = *f->cat;
    int n = c.nobj();
    Point q = pt;
    q.push_back({0, 0});
    std::vector<FinSet> s(n);
    std::vector<size_t> off(n + 1, 0);
    for (int o = 0; o < n; ++o) {
      q.back() = {o, o};
      s[o] = info(f->left, q).set;
      off[o + 1] = off[o] + s[o].size();
    }
    if (off[n] > max_set_size()) too_big(off[n]);
    std::vector<size_t> parent(off[n]);
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](size_t x) {
      while (parent[x] != x) {
        parent[x] = parent[parent[x]];
        x = parent[x];
      }
      return x;
    };
    MorPoint m = ident(f->env_cats, pt);
    m.push_back({0, 0});
    for (int g = 0; g < c.nmor(); ++g) {
      if (c.is_identity(g)) continue;
      int a = c.mors[g].src, b = c.mors[g].dst;
      Point pba = pt, pa = pt, pb = pt;
      pba.push_back({b, a});
      pa.push_back({a, a});
      pb.push_back({b, b});
      const FinSet src = info(f->left, pba).set;
      for (auto& p : src.elems) {
        m.back() = {g, c.identity[a]};
        int i = s[a].index_of(act(f->left, pba, pa, m, p));
        m.back() = {c.identity[b], g};
        int j = s[b].index_of(act(f->left, pba, pb, m, p));
        if (i < 0 || j < 0) throw Error(ErrorKind::Soundness, "coend relation leaves the diagonal sets");
        size_t x = find(off[a] + i), y = find(off[b] + j);
        if (x != y) parent[std::max(x, y)] = std::min(x, y);
      }
    }
    // least element per class
    std::vector<Value> all(off[n]);
    for (int o = 0; o < n; ++o)
      for (size_t i = 0; i < s[o].size(); ++i) all[off[o] + i] = Value::inj(c.objects[o], s[o].elems[i]);
    std::map<size_t, size_t> best;
    for (size_t e = 0; e < all.size(); ++e) {
      size_t r = find(e);
      auto it = best.find(r);
      if (it == best.end() || all[e] < all[it->second]) best[r] = e;
    }
    for (auto& [r, e] : best) si.set.elems.push_back(all[e]);
    std::sort(si.set.elems.begin(), si.set.elems.end());
    si.rep.assign(n, {});
    for (int o = 0; o < n; ++o)
      for (size_t i = 0; i < s[o].size(); ++i)
        si.rep[o].push_back(si.set.index_of(all[best[find(off[o] + i)]]));
  }
};

Evaluator::Evaluator(const Model& m, const Signature& sig)
    : model_(m), sig_(sig), impl_(std::make_unique<Impl>(m, sig)) {}
Evaluator::~Evaluator() = default;

int Evaluator::compile(const Form& f, const TermCtx& ctx) {
  auto key = std::make_pair(f.get(), to_string(ctx));
  auto it = impl_->compiled.find(key);
  if (it != impl_->compiled.end()) return it->second;
  std::vector<const FinCat*> cats;
  for (auto& e : ctx) cats.push_back(&model_.cat(normalize(e.cat)));
  const CForm* c = impl_->cform(f, ctx, cats);
  impl_->keepalive.push_back(f);
  int id = static_cast<int>(impl_->roots.size());
  (void)c;
  impl_->roots.push_back(static_cast<int>(impl_->forms.size()) - 1);
  impl_->compiled[key] = id;
  return id;
}

const FinSet& Evaluator::set(int id, const Point& pt) {
  return impl_->info(impl_->forms[impl_->roots[id]].get(), pt).set;
}

Value Evaluator::act(int id, const Point& a, const Point& b, const MorPoint& m, const Value& x) {
  return impl_->act(impl_->forms[impl_->roots[id]].get(), a, b, m, x);
}

MorPoint Evaluator::identity(const TermCtx& ctx, const Point& pt) {
  std::vector<const FinCat*> cats;
  for (auto& e : ctx) cats.push_back(&model_.cat(normalize(e.cat)));
  return impl_->ident(cats, pt);
}

int Evaluator::compile_term(const Term& t, const TermCtx& ctx) {
  impl_->terms.push_back(impl_->cterm(t, ctx));
  return static_cast<int>(impl_->terms.size()) - 1;
}

int Evaluator::term_object(int id, const Point& pt) { return tobj(impl_->terms[id], pt); }

FinSet eval_formula(const Form& f, const Model& m, const Signature& sig, const TermCtx& ctx, const Point& pt) {
  Evaluator ev(m, sig);
  return ev.set(ev.compile(f, ctx), pt);
}

// ---- sequents ----

SeqSem::SeqSem(Evaluator& ev, const Sequent& s) : ev_(ev), seq_(s) {
  for (auto& h : s.hyps) hyps_.push_back(ev.compile(h.form, s.ctx));
  goal_ = ev.compile(s.goal, s.ctx);
  for (auto& e : s.ctx) {
    cats_.push_back(&ev.cat(normalize(e.cat)));
    npoints_ = mul(npoints_, cats_.back()->nobj());
  }
}

std::vector<int> SeqSem::point(size_t i) const {
  std::vector<int> p(cats_.size());
  for (size_t j = cats_.size(); j-- > 0;) {
    size_t n = cats_[j]->nobj();
    p[j] = static_cast<int>(i % n);
    i /= n;
  }
  return p;
}

size_t SeqSem::point_index(const std::vector<int>& objs) const {
  size_t i = 0;
  for (size_t j = 0; j < cats_.size(); ++j) i = i * cats_[j]->nobj() + objs[j];
  return i;
}

std::vector<const FinSet*> SeqSem::hyp_sets(const Point& pt) const {
  std::vector<const FinSet*> out;
  for (int h : hyps_) out.push_back(&ev_.set(h, pt));
  return out;
}

const FinSet& SeqSem::goal_set(const Point& pt) const { return ev_.set(goal_, pt); }

size_t SeqSem::ninputs(const Point& pt) const {
  size_t n = 1;
  for (auto* s : hyp_sets(pt)) n = mul(n, s->size());
  if (n > max_set_size()) too_big(n);
  return n;
}

std::vector<Value> SeqSem::decode(const Point& pt, size_t k) const {
  auto hs = hyp_sets(pt);
  std::vector<Value> out(hs.size());
  for (size_t j = hs.size(); j-- > 0;) {
    out[j] = hs[j]->elems[k % hs[j]->size()];
    k /= hs[j]->size();
  }
  return out;
}

long SeqSem::encode(const Point& pt, const std::vector<Value>& ks) const {
  auto hs = hyp_sets(pt);
  long k = 0;
  for (size_t j = 0; j < hs.size(); ++j) {
    int i = hs[j]->index_of(ks[j]);
    if (i < 0) return -1;
    k = k * static_cast<long>(hs[j]->size()) + i;
  }
  return k;
}

// ---- derivations ----

namespace {

struct Fam {
  std::shared_ptr<SeqSem> sem;
  DinatFamily fam;

  Value at(const std::vector<int>& p, const std::vector<Value>& ks) const {
    long k = sem->encode(diagonal(p), ks);
    if (k < 0) throw Error(ErrorKind::Soundness, "input outside the hypothesis sets of " + to_string(fam.seq));
    return fam.table[sem->point_index(p)][k];
  }
};

template <class T>
std::vector<T> erase_at(std::vector<T> v, size_t i) {
  v.erase(v.begin() + i);
  return v;
}

template <class T>
std::vector<T> insert_at(std::vector<T> v, size_t i, T x) {
  v.insert(v.begin() + i, std::move(x));
  return v;
}

struct DerivEval {
  Evaluator& ev;
  const FamilyEnv& env;

  template <class F>
  Fam tabulate(const Sequent& s, F fn) {
    Fam out;
    out.sem = std::make_shared<SeqSem>(ev, s);
    out.fam.seq = s;
    const SeqSem& S = *out.sem;
    out.fam.table.resize(S.npoints());
    for (size_t i = 0; i < S.npoints(); ++i) {
      std::vector<int> p = S.point(i);
      Point pt = diagonal(p);
      size_t n = S.ninputs(pt);
      auto& row = out.fam.table[i];
      row.reserve(n);
      for (size_t k = 0; k < n; ++k) {
        const std::vector<Value> in = S.decode(pt, k);
        row.push_back(fn(p, pt, in));
      }
    }
    return out;
  }

  // J semantics for the sequent c carrying e, given the contracted family h.
  Value j_apply(const Sequent& c, const std::string& e, const Fam& h, const std::vector<int>& p,
                const std::vector<Value>& ks) {
    HomHyp hh = hom_hyp(c, e);
    int ia = c.ctx_index(hh.a), ib = c.ctx_index(hh.b);
    int a0 = p[ia], b0 = p[ib];
    const FinCat& hc = ev.cat(normalize(hh.cat));
    int f = hc.mor_index(ks[hh.index]);
    if (f < 0) throw Error(ErrorKind::Soundness, "equality element is not a morphism");
    std::vector<Value> k1 = erase_at(ks, hh.index);
    std::vector<int> pz = erase_at(p, ib);
    int iz = ia - (ib < ia ? 1 : 0);
    Point z1 = diagonal(pz), z2 = z1, z3 = z1;
    z1[iz] = {b0, a0};
    z2[iz] = {b0, b0};
    z3[iz] = {a0, b0};
    const SeqSem& hs = *h.sem;
    MorPoint m = ev.identity(hs.seq().ctx, z2);
    m[iz] = {hc.identity[b0], f};
    std::vector<Value> k2;
    for (size_t j = 0; j < k1.size(); ++j) k2.push_back(ev.act(hs.hyp_id(j), z1, z2, m, k1[j]));
    pz[iz] = b0;
    Value out = h.at(pz, k2);
    m[iz] = {f, hc.identity[b0]};
    return ev.act(hs.goal_id(), z2, z3, m, out);
  }

  Fam run(const Deriv& d) {
    std::vector<Fam> ks;
    for (auto& k : d->kids) ks.push_back(run(k));
    const Sequent& c = d->concl;
    const auto& n = d->names;
    switch (d->rule) {
      case Rule::Id:
        return tabulate(c, [](auto&, auto&, const std::vector<Value>& k) { return k[0]; });
      case Rule::Refl: {
        int i = c.ctx_index(c.goal->terms[1]->name);
        const FinCat& cc = ev.cat(normalize(c.ctx[i].cat));
        return tabulate(c, [&](const std::vector<int>& p, auto&, auto&) { return cc.mors[cc.identity[p[i]]].name; });
      }
      case Rule::TopIntro:
        return tabulate(c, [](auto&, auto&, auto&) { return Value::tuple({}); });
      case Rule::Premise: {
        auto it = env.find(n[0]);
        if (it == env.end()) throw Error(ErrorKind::SchemaMismatch, "no family supplied for premise " + n[0]);
        Fam out;
        out.sem = std::make_shared<SeqSem>(ev, c);
        out.fam = it->second;
        out.fam.seq = c;
        if (out.fam.table.size() != out.sem->npoints())
          throw Error(ErrorKind::SchemaMismatch, "family for premise " + n[0] + " has the wrong shape");
        for (size_t i = 0; i < out.fam.table.size(); ++i)
          if (out.fam.table[i].size() != out.sem->ninputs(diagonal(out.sem->point(i))))
            throw Error(ErrorKind::SchemaMismatch, "family for premise " + n[0] + " has the wrong shape");
        return out;
      }
      case Rule::Pair:
        return tabulate(c, [&](const std::vector<int>& p, auto&, const std::vector<Value>& k) {
          return Value::tuple({ks[0].at(p, k), ks[1].at(p, k)});
        });
      case Rule::Proj1:
      case Rule::Proj2: {
        size_t i = d->rule == Rule::Proj1 ? 0 : 1;
        return tabulate(c, [&](const std::vector<int>& p, auto&, const std::vector<Value>& k) {
          return ks[0].at(p, k)[i];
        });
      }
      case Rule::Weaken: {
        size_t i = c.hyp_index(n[0]);
        return tabulate(c, [&](const std::vector<int>& p, auto&, const std::vector<Value>& k) {
          return ks[0].at(p, erase_at(k, i));
        });
      }
      case Rule::Curry: {
        const Sequent& ps = ks[0].fam.seq;
        std::vector<int> picked;
        std::vector<Form> pf;
        for (auto& l : n) {
          picked.push_back(ps.hyp_index(l));
          pf.push_back(ps.hyps[picked.back()].form);
        }
        std::vector<int> rest;
        for (int i = 0; i < static_cast<int>(ps.hyps.size()); ++i)
          if (std::find(picked.begin(), picked.end(), i) == picked.end()) rest.push_back(i);
        int lid = ev.compile(pack(pf), ps.ctx);
        return tabulate(c, [&](const std::vector<int>& p, const Point& pt, const std::vector<Value>& k) {
          std::vector<Value> outs;
          for (auto& l : ev.set(lid, pt).elems) {
            std::vector<Value> in(ps.hyps.size());
            for (size_t j = 0; j < rest.size(); ++j) in[rest[j]] = k[j];
            auto comps = unpack_value(l, picked.size());
            for (size_t j = 0; j < picked.size(); ++j) in[picked[j]] = comps[j];
            outs.push_back(ks[0].at(p, in));
          }
          return Value::func(std::move(outs));
        });
      }
      case Rule::Uncurry: {
        std::vector<int> picked;
        std::vector<Form> pf;
        for (auto& l : n) {
          picked.push_back(c.hyp_index(l));
          pf.push_back(c.hyps[picked.back()].form);
        }
        int lid = ev.compile(pack(pf), c.ctx);
        return tabulate(c, [&](const std::vector<int>& p, const Point& pt, const std::vector<Value>& k) {
          std::vector<Value> pv, rv;
          for (int i : picked) pv.push_back(k[i]);
          for (int i = 0; i < static_cast<int>(k.size()); ++i)
            if (std::find(picked.begin(), picked.end(), i) == picked.end()) rv.push_back(k[i]);
          Value phi = ks[0].at(p, rv);
          int i = ev.set(lid, pt).index_of(pack_value(pv));
          if (i < 0) throw Error(ErrorKind::Soundness, "uncurried input outside its set");
          return phi[i];
        });
      }
      case Rule::Reindex: {
        const Sequent& ps = ks[0].fam.seq;
        std::vector<int> tids;
        for (auto& e : ps.ctx) {
          Term t = var(e.name);
          for (auto& [v, u] : d->subst)
            if (v == e.name) t = u;
          tids.push_back(ev.compile_term(t, c.ctx));
        }
        return tabulate(c, [&](const std::vector<int>&, const Point& pt, const std::vector<Value>& k) {
          std::vector<int> q;
          for (int t : tids) q.push_back(ev.term_object(t, pt));
          return ks[0].at(q, k);
        });
      }
      case Rule::J:
        return tabulate(c, [&](const std::vector<int>& p, auto&, const std::vector<Value>& k) {
          return j_apply(c, n[0], ks[0], p, k);
        });
      case Rule::JInv: {
        const Sequent& js = ks[0].fam.seq;
        HomHyp hh = hom_hyp(js, n[0]);
        int ia = js.ctx_index(hh.a), ib = js.ctx_index(hh.b);
        int iac = ia - (ib < ia ? 1 : 0);
        const FinCat& hc = ev.cat(normalize(hh.cat));
        return tabulate(c, [&](const std::vector<int>& p, auto&, const std::vector<Value>& k) {
          std::vector<int> q = insert_at(p, ib, p[iac]);
          std::vector<Value> kk = insert_at(k, hh.index, hc.mors[hc.identity[p[iac]]].name);
          return ks[0].at(q, kk);
        });
      }
      case Rule::JWithEq: {
        Sequent jf = c;
        jf.hyps.insert(jf.hyps.begin(), {n[0], rename_ctx(ks[1].fam.seq, c.ctx).goal});
        return tabulate(c, [&](const std::vector<int>& p, auto&, const std::vector<Value>& k) {
          Value e = ks[1].at(p, k);
          return j_apply(jf, n[0], ks[0], p, insert_at(k, 0, e));
        });
      }
      case Rule::EndIntro: {
        const Sequent& ps = ks[0].fam.seq;
        int i = ps.ctx_index(n[0]);
        const FinCat& xc = ev.cat(normalize(ps.ctx[i].cat));
        return tabulate(c, [&](const std::vector<int>& p, auto&, const std::vector<Value>& k) {
          std::vector<Value> outs;
          for (int o = 0; o < xc.nobj(); ++o) outs.push_back(ks[0].at(insert_at(p, i, o), k));
          return Value::tuple(std::move(outs));
        });
      }
      case Rule::EndElim: {
        int i = c.ctx_index(n[0]);
        return tabulate(c, [&](const std::vector<int>& p, auto&, const std::vector<Value>& k) {
          return ks[0].at(erase_at(p, i), k)[p[i]];
        });
      }
      case Rule::CoendIntro: {
        const Sequent& ps = ks[0].fam.seq;
        int i = ps.ctx_index(n[0]);
        const FinCat& xc = ev.cat(normalize(ps.ctx[i].cat));
        size_t nh = ps.hyps.size();
        return tabulate(c, [&](const std::vector<int>& p, auto&, const std::vector<Value>& k) {
          int o = xc.obj_index(k[0][0]);
          return ks[0].at(insert_at(p, i, o), unpack_value(k[0][1], nh));
        });
      }
      case Rule::CoendElim: {
        int i = c.ctx_index(n[0]);
        const FinCat& xc = ev.cat(normalize(c.ctx[i].cat));
        const SeqSem& s0 = *ks[0].sem;
        return tabulate(c, [&](const std::vector<int>& p, auto&, const std::vector<Value>& k) {
          std::vector<int> q = erase_at(p, i);
          Point qt = diagonal(q);
          Value x = Value::inj(xc.objects[p[i]], pack_value(k));
          Value r = ev.act(s0.hyp_id(0), qt, qt, ev.identity(s0.seq().ctx, qt), x);
          return ks[0].at(q, {r});
        });
      }
      case Rule::Exchange: {
        int i = ks[0].fam.seq.ctx_index(n[0]);
        return tabulate(c, [&](const std::vector<int>& p, auto&, const std::vector<Value>& k) {
          std::vector<int> q = p;
          std::swap(q[i], q[i + 1]);
          return ks[0].at(q, k);
        });
      }
      case Rule::PairCtx: {
        const Sequent& ps = ks[0].fam.seq;
        int i = ps.ctx_index(n[1]);
        int nb = ev.cat(normalize(ps.ctx[i + 1].cat)).nobj();
        return tabulate(c, [&](const std::vector<int>& p, auto&, const std::vector<Value>& k) {
          std::vector<int> q = p;
          q[i] = p[i] / nb;
          q.insert(q.begin() + i + 1, p[i] % nb);
          return ks[0].at(q, k);
        });
      }
      case Rule::UnpairCtx: {
        int i = c.ctx_index(n[1]);
        int nb = ev.cat(normalize(c.ctx[i + 1].cat)).nobj();
        return tabulate(c, [&](const std::vector<int>& p, auto&, const std::vector<Value>& k) {
          std::vector<int> q = p;
          q[i] = p[i] * nb + p[i + 1];
          q.erase(q.begin() + i + 1);
          return ks[0].at(q, k);
        });
      }
      case Rule::Reorient:
        return tabulate(c, [&](const std::vector<int>& p, auto&, const std::vector<Value>& k) {
          return ks[0].at(p, k);
        });
      case Rule::ImpFunc: {
        const SeqSem& ps = *ks[0].sem;
        return tabulate(c, [&](const std::vector<int>& p, const Point& pt, const std::vector<Value>& k) {
          const FinSet& bset = ps.goal_set(pt);
          std::vector<Value> outs;
          for (auto& l : ev.set(ps.hyp_id(0), pt).elems) {
            int i = bset.index_of(ks[0].at(p, {l}));
            outs.push_back(ks[1].at(p, {k[0][i]}));
          }
          return Value::func(std::move(outs));
        });
      }
      case Rule::Compose: {
        const Sequent& os = ks[0].fam.seq;
        size_t li = os.hyp_index(n[0]);
        size_t ni = ks[1].fam.seq.hyps.size();
        return tabulate(c, [&](const std::vector<int>& p, auto&, const std::vector<Value>& k) {
          std::vector<Value> inner(k.begin() + li, k.begin() + li + ni);
          std::vector<Value> outer(k.begin(), k.begin() + li);
          outer.push_back(ks[1].at(p, inner));
          outer.insert(outer.end(), k.begin() + li + ni, k.end());
          return ks[0].at(p, outer);
        });
      }
      default:
        throw Error(ErrorKind::SchemaMismatch, std::string("cannot evaluate rule ") + rule_name(d->rule));
    }
  }
};

}  // namespace

DinatFamily eval_derivation(Evaluator& ev, const Deriv& d, const Defs* defs, const FamilyEnv& env, bool check) {
  Deriv e = expand_all(d, ev.signature(), defs);
  DerivEval de{ev, env};
  DinatFamily out = de.run(e).fam;
  out.seq = d->concl;
  if (check) {
    if (auto f = hexagon_failure(ev, out))
      throw Error(ErrorKind::Soundness, "family fails the hexagon in " + f->var + " along " + f->morphism +
                                            " at input " + f->input + ": " + f->lhs + " vs " + f->rhs);
  }
  return out;
}

// ---- hexagon ----

std::optional<HexagonFailure> hexagon_failure(Evaluator& ev, const DinatFamily& fam) {
  SeqSem s(ev, fam.seq);
  const auto& cats = s.cats();
  if (fam.table.size() != s.npoints()) throw Error(ErrorKind::SchemaMismatch, "family has the wrong number of points");
  auto value = [&](const std::vector<int>& p, const std::vector<Value>& k) -> Value {
    long i = s.encode(diagonal(p), k);
    if (i < 0) throw Error(ErrorKind::Soundness, "hypotheses act outside their sets");
    return fam.table[s.point_index(p)][i];
  };
  for (size_t pi = 0; pi < s.npoints(); ++pi) {
    std::vector<int> p = s.point(pi);
    Point pt = diagonal(p);
    if (fam.table[pi].size() != s.ninputs(pt)) throw Error(ErrorKind::SchemaMismatch, "family has the wrong shape");
  }
  for (size_t v = 0; v < cats.size(); ++v) {
    const FinCat& c = *cats[v];
    for (int f = 0; f < c.nmor(); ++f) {
      if (c.is_identity(f)) continue;
      int a = c.mors[f].src, b = c.mors[f].dst;
      for (size_t pi = 0; pi < s.npoints(); ++pi) {
        std::vector<int> p = s.point(pi);
        if (p[v] != a) continue;
        std::vector<int> pa = p, pb = p;
        pb[v] = b;
        Point m = diagonal(p), ta = diagonal(pa), tb = diagonal(pb), y = diagonal(p);
        m[v] = {b, a};
        y[v] = {a, b};
        MorPoint mor = ev.identity(fam.seq.ctx, ta);
        size_t n = s.ninputs(m);
        for (size_t k = 0; k < n; ++k) {
          std::vector<Value> ks = s.decode(m, k), kb, ka;
          mor[v] = {c.identity[b], f};
          for (size_t j = 0; j < ks.size(); ++j) kb.push_back(ev.act(s.hyp_id(j), m, tb, mor, ks[j]));
          mor[v] = {f, c.identity[a]};
          for (size_t j = 0; j < ks.size(); ++j) ka.push_back(ev.act(s.hyp_id(j), m, ta, mor, ks[j]));
          mor[v] = {f, c.identity[b]};
          Value lhs = ev.act(s.goal_id(), tb, y, mor, value(pb, kb));
          mor[v] = {c.identity[a], f};
          Value rhs = ev.act(s.goal_id(), ta, y, mor, value(pa, ka));
          if (!(lhs == rhs)) {
            std::string in = "(";
            for (size_t j = 0; j < ks.size(); ++j) in += (j ? ", " : "") + ks[j].to_string();
            return HexagonFailure{fam.seq.ctx[v].name, c.mors[f].name.to_string(), p, in + ")", lhs.to_string(),
                                  rhs.to_string()};
          }
        }
      }
    }
  }
  return std::nullopt;
}

bool check_dinatural(Evaluator& ev, const DinatFamily& fam) { return !hexagon_failure(ev, fam).has_value(); }

bool families_equal(const DinatFamily& a, const DinatFamily& b) {
  if (!sequent_equal(a.seq, b.seq) || a.table.size() != b.table.size())
    throw Error(ErrorKind::SchemaMismatch, "families over different sequents: " + to_string(a.seq) + " and " +
                                               to_string(b.seq));
  for (size_t i = 0; i < a.table.size(); ++i) {
    if (a.table[i].size() != b.table[i].size()) throw Error(ErrorKind::SchemaMismatch, "families differ in shape");
    for (size_t k = 0; k < a.table[i].size(); ++k)
      if (!(a.table[i][k] == b.table[i][k])) return false;
  }
  return true;
}

// ---- enumeration ----

namespace {

struct Enumerator {
  Evaluator& ev;
  const Sequent& seq;
  SeqSem s;
  std::vector<size_t> off;                  // first variable of each point
  std::vector<const FinSet*> dom;           // per variable
  struct Con {
    size_t vl, vr;
    const std::vector<int>* ml;
    const std::vector<int>* mr;
  };
  std::vector<std::vector<Con>> cons;       // by later variable
  std::vector<std::unique_ptr<std::vector<int>>> maps;

  Enumerator(Evaluator& e, const Sequent& q) : ev(e), seq(q), s(e, q) {
    for (size_t pi = 0; pi < s.npoints(); ++pi) {
      Point pt = diagonal(s.point(pi));
      off.push_back(dom.size());
      size_t n = s.ninputs(pt);
      const FinSet* g = &s.goal_set(pt);
      for (size_t k = 0; k < n; ++k) dom.push_back(g);
    }
    off.push_back(dom.size());
    cons.resize(dom.size());
    build();
  }

  const std::vector<int>* goal_map(const Point& from, const Point& to, const MorPoint& m) {
    auto v = std::make_unique<std::vector<int>>();
    const FinSet& tgt = s.goal_set(to);
    for (auto& g : s.goal_set(from).elems) v->push_back(tgt.index_of(ev.act(s.goal_id(), from, to, m, g)));
    maps.push_back(std::move(v));
    return maps.back().get();
  }

  void build() {
    const auto& cats = s.cats();
    for (size_t v = 0; v < cats.size(); ++v) {
      const FinCat& c = *cats[v];
      for (int f = 0; f < c.nmor(); ++f) {
        if (c.is_identity(f)) continue;
        int a = c.mors[f].src, b = c.mors[f].dst;
        for (size_t pi = 0; pi < s.npoints(); ++pi) {
          std::vector<int> p = s.point(pi);
          if (p[v] != a) continue;
          std::vector<int> pa = p, pb = p;
          pb[v] = b;
          Point m = diagonal(p), ta = diagonal(pa), tb = diagonal(pb), y = diagonal(p);
          m[v] = {b, a};
          y[v] = {a, b};
          MorPoint mor = ev.identity(seq.ctx, ta);
          mor[v] = {f, c.identity[b]};
          const std::vector<int>* ml = goal_map(tb, y, mor);
          mor[v] = {c.identity[a], f};
          const std::vector<int>* mr = goal_map(ta, y, mor);
          size_t n = s.ninputs(m);
          size_t ia = s.point_index(pa), ib = s.point_index(pb);
          for (size_t k = 0; k < n; ++k) {
            std::vector<Value> ks = s.decode(m, k), kb, ka;
            mor[v] = {c.identity[b], f};
            for (size_t j = 0; j < ks.size(); ++j) kb.push_back(ev.act(s.hyp_id(j), m, tb, mor, ks[j]));
            mor[v] = {f, c.identity[a]};
            for (size_t j = 0; j < ks.size(); ++j) ka.push_back(ev.act(s.hyp_id(j), m, ta, mor, ks[j]));
            long xb = s.encode(tb, kb), xa = s.encode(ta, ka);
            if (xa < 0 || xb < 0) throw Error(ErrorKind::Soundness, "hypotheses act outside their sets");
            Con k2{off[ib] + xb, off[ia] + xa, ml, mr};
            cons[std::max(k2.vl, k2.vr)].push_back(k2);
          }
        }
      }
    }
  }

  template <class F>
  void run(const EnumOptions& opt, F on_found) {
    size_t nv = dom.size();
    for (auto* d : dom)
      if (d->size() == 0) return;
    std::vector<int> val(nv, 0);
    long nodes = 0;
    bool stop = false;
    auto rec = [&](auto& self, size_t v) -> void {
      if (stop) return;
      if (v == nv) {
        stop = !on_found(val);
        return;
      }
      for (size_t i = 0; i < dom[v]->size() && !stop; ++i) {
        if (++nodes > opt.max_nodes)
          throw Error(ErrorKind::BoundExceeded, "dinatural enumeration exceeds " + std::to_string(opt.max_nodes) +
                                                    " search nodes");
        val[v] = static_cast<int>(i);
        bool ok = true;
        for (auto& k : cons[v])
          if ((*k.ml)[val[k.vl]] != (*k.mr)[val[k.vr]]) {
            ok = false;
            break;
          }
        if (ok) self(self, v + 1);
      }
    };
    rec(rec, 0);
  }

  DinatFamily family(const std::vector<int>& val) const {
    DinatFamily f;
    f.seq = seq;
    f.table.resize(s.npoints());
    for (size_t pi = 0; pi < s.npoints(); ++pi)
      for (size_t v = off[pi]; v < off[pi + 1]; ++v) f.table[pi].push_back(dom[v]->elems[val[v]]);
    return f;
  }
};

}  // namespace

std::vector<DinatFamily> enumerate_dinaturals(Evaluator& ev, const Sequent& s, const EnumOptions& opt) {
  Enumerator en(ev, s);
  std::vector<DinatFamily> out;
  en.run(opt, [&](const std::vector<int>& val) {
    out.push_back(en.family(val));
    if (out.size() > max_set_size()) too_big(out.size());
    return out.size() < opt.limit;
  });
  return out;
}

size_t count_dinaturals(Evaluator& ev, const Sequent& s, const EnumOptions& opt) {
  Enumerator en(ev, s);
  size_t n = 0;
  en.run(opt, [&](const std::vector<int>&) { return ++n < opt.limit; });
  return n;
}

// ---- (co)ends ----

DinatFamily compute_end(Evaluator& ev, const TermCtx& ctx, const std::string& x, const Cat& c, const Form& body) {
  Sequent s;
  s.ctx = ctx;
  s.ctx.push_back({x, c});
  s.hyps = {{"p", end_(x, c, body)}};
  s.goal = body;
  SeqSem sem(ev, s);
  DinatFamily f;
  f.seq = s;
  for (size_t i = 0; i < sem.npoints(); ++i) {
    std::vector<int> p = sem.point(i);
    f.table.emplace_back();
    for (auto& t : sem.hyp_sets(diagonal(p))[0]->elems) f.table.back().push_back(t[p.back()]);
  }
  return f;
}

DinatFamily compute_coend(Evaluator& ev, const TermCtx& ctx, const std::string& x, const Cat& c, const Form& body) {
  Sequent s;
  s.ctx = ctx;
  s.ctx.push_back({x, c});
  s.hyps = {{"p", body}};
  s.goal = coend(x, c, body);
  SeqSem sem(ev, s);
  const FinCat& xc = ev.cat(normalize(c));
  DinatFamily f;
  f.seq = s;
  for (size_t i = 0; i < sem.npoints(); ++i) {
    std::vector<int> p = sem.point(i);
    Point pt = diagonal(p);
    MorPoint id = ev.identity(s.ctx, pt);
    f.table.emplace_back();
    for (auto& e : sem.hyp_sets(pt)[0]->elems)
      f.table.back().push_back(ev.act(sem.goal_id(), pt, pt, id, Value::inj(xc.objects[p.back()], e)));
  }
  return f;
}

DinatFamily compose_pointwise(Evaluator& ev, const DinatFamily& alpha, const DinatFamily& beta) {
  SeqSem sb(ev, beta.seq);
  DinatFamily out;
  out.seq = alpha.seq;
  out.seq.goal = rename_ctx(beta.seq, alpha.seq.ctx).goal;
  if (beta.seq.hyps.size() != 1 || alpha.table.size() != beta.table.size())
    throw Error(ErrorKind::SchemaMismatch, "families do not compose");
  out.table.resize(alpha.table.size());
  for (size_t i = 0; i < alpha.table.size(); ++i) {
    Point pt = diagonal(sb.point(i));
    const FinSet& mid = *sb.hyp_sets(pt)[0];
    for (auto& b : alpha.table[i]) {
      int j = mid.index_of(b);
      if (j < 0) throw Error(ErrorKind::SchemaMismatch, "families do not compose");
      out.table[i].push_back(beta.table[i][j]);
    }
  }
  return out;
}

}  // namespace dinat
