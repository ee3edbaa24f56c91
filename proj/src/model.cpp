#include "dinat/model.hpp"

#include <algorithm>

#include "dinat/error.hpp"

namespace dinat {

int FinCat::obj_index(const Value& v) const {
  auto it = obj_ix_.find(v);
  return it == obj_ix_.end() ? -1 : it->second;
}

int FinCat::mor_index(const Value& v) const {
  auto it = mor_ix_.find(v);
  return it == mor_ix_.end() ? -1 : it->second;
}

void FinCat::reset_tables() { comp_.assign(mors.size() * mors.size(), -1); }

void FinCat::finalize() {
  size_t n = objects.size();
  homsets_.assign(n * n, FinSet{});
  hom_ix_.assign(n * n, {});
  obj_ix_.clear();
  mor_ix_.clear();
  for (size_t i = 0; i < n; ++i) obj_ix_[objects[i]] = static_cast<int>(i);
  for (size_t m = 0; m < mors.size(); ++m) {
    mor_ix_[mors[m].name] = static_cast<int>(m);
    hom_ix_[static_cast<size_t>(mors[m].src) * n + mors[m].dst].push_back(static_cast<int>(m));
  }
  for (auto& h : hom_ix_) {
    std::sort(h.begin(), h.end(), [&](int a, int b) { return mors[a].name < mors[b].name; });
  }
  for (size_t i = 0; i < n * n; ++i)
    for (int m : hom_ix_[i]) homsets_[i].elems.push_back(mors[m].name);
}

void FinCat::validate(const std::string& name) const {
  auto fail = [&](const std::string& msg) { throw Error(ErrorKind::Model, "category " + name + ": " + msg); };
  if (obj_ix_.size() != objects.size()) fail("duplicate object names");
  if (mor_ix_.size() != mors.size()) fail("duplicate morphism names");
  for (int o = 0; o < nobj(); ++o) {
    int i = identity[o];
    if (mors[i].src != o || mors[i].dst != o) fail("identity of " + objects[o].to_string() + " is not an endomorphism");
  }
  for (int f = 0; f < nmor(); ++f)
    for (int g = 0; g < nmor(); ++g) {
      int h = compose(f, g);
      bool composable = mors[f].dst == mors[g].src;
      if (composable && h < 0)
        fail("missing composite of (" + mors[f].name.to_string() + ", " + mors[g].name.to_string() + ")");
      if (!composable && h >= 0)
        fail("composite given for non-composable (" + mors[f].name.to_string() + ", " + mors[g].name.to_string() + ")");
      if (composable && (mors[h].src != mors[f].src || mors[h].dst != mors[g].dst))
        fail("composite of (" + mors[f].name.to_string() + ", " + mors[g].name.to_string() + ") has wrong endpoints");
    }
  for (int f = 0; f < nmor(); ++f) {
    if (compose(identity[mors[f].src], f) != f || compose(f, identity[mors[f].dst]) != f)
      fail("identity law fails at " + mors[f].name.to_string());
  }
  for (int f = 0; f < nmor(); ++f)
    for (int g = 0; g < nmor(); ++g) {
      int fg = compose(f, g);
      if (fg < 0) continue;
      for (int h = 0; h < nmor(); ++h) {
        int gh = compose(g, h);
        if (gh < 0) continue;
        if (compose(fg, h) != compose(f, gh))
          fail("composition not associative on (" + mors[f].name.to_string() + ", " + mors[g].name.to_string() +
               ", " + mors[h].name.to_string() + ")");
      }
    }
}

FinCat make_category(const std::vector<std::string>& objects, const std::vector<MorSpec>& mors,
                     const std::vector<CompSpec>& comps, const std::string& name,
                     const std::map<std::string, std::string>& identities) {
  FinCat c;
  auto fail = [&](const std::string& msg) { throw Error(ErrorKind::Model, "category " + name + ": " + msg); };
  std::map<std::string, int> oix, mix;
  for (auto& o : objects) {
    if (oix.count(o)) fail("duplicate object " + o);
    oix[o] = c.nobj();
    c.objects.push_back(Value::name(o));
  }
  for (auto& o : objects) {
    auto it = identities.find(o);
    std::string id = it == identities.end() ? "id_" + o : it->second;
    if (mix.count(id)) fail("duplicate morphism " + id);
    mix[id] = c.nmor();
    c.identity.push_back(c.nmor());
    c.mors.push_back({Value::name(id), oix[o], oix[o]});
  }
  for (auto& m : mors) {
    if (mix.count(m.name)) fail("duplicate morphism " + m.name);
    if (!oix.count(m.src) || !oix.count(m.dst)) fail("morphism " + m.name + " has an unknown endpoint");
    mix[m.name] = c.nmor();
    c.mors.push_back({Value::name(m.name), oix[m.src], oix[m.dst]});
  }
  c.reset_tables();
  for (int m = 0; m < c.nmor(); ++m) {
    c.set_compose(c.identity[c.mors[m].src], m, m);
    c.set_compose(m, c.identity[c.mors[m].dst], m);
  }
  for (auto& t : comps) {
    if (!mix.count(t.first) || !mix.count(t.second) || !mix.count(t.result))
      fail("composition entry (" + t.first + ", " + t.second + ", " + t.result + ") names an unknown morphism");
    int f = mix[t.first], g = mix[t.second];
    int prev = c.compose(f, g);
    if (prev >= 0 && prev != mix[t.result])
      fail("conflicting composite for (" + t.first + ", " + t.second + ")");
    c.set_compose(f, g, mix[t.result]);
  }
  c.finalize();
  c.validate(name);
  return c;
}

FinCat opposite(const FinCat& c) {
  FinCat o;
  o.objects = c.objects;
  o.identity = c.identity;
  for (auto& m : c.mors) o.mors.push_back({m.name, m.dst, m.src});
  o.reset_tables();
  for (int f = 0; f < c.nmor(); ++f)
    for (int g = 0; g < c.nmor(); ++g) o.set_compose(f, g, c.compose(g, f));
  o.finalize();
  return o;
}

FinCat product(const FinCat& a, const FinCat& b) {
  FinCat p;
  for (auto& x : a.objects)
    for (auto& y : b.objects) p.objects.push_back(Value::tuple({x, y}));
  for (auto& f : a.mors)
    for (auto& g : b.mors)
      p.mors.push_back({Value::tuple({f.name, g.name}), f.src * b.nobj() + g.src, f.dst * b.nobj() + g.dst});
  for (int x = 0; x < a.nobj(); ++x)
    for (int y = 0; y < b.nobj(); ++y) p.identity.push_back(a.identity[x] * b.nmor() + b.identity[y]);
  p.reset_tables();
  for (int f1 = 0; f1 < a.nmor(); ++f1)
    for (int f2 = 0; f2 < a.nmor(); ++f2) {
      int f = a.compose(f1, f2);
      if (f < 0) continue;
      for (int g1 = 0; g1 < b.nmor(); ++g1)
        for (int g2 = 0; g2 < b.nmor(); ++g2) {
          int g = b.compose(g1, g2);
          if (g < 0) continue;
          p.set_compose(f1 * b.nmor() + g1, f2 * b.nmor() + g2, f * b.nmor() + g);
        }
    }
  p.finalize();
  return p;
}

FinCat unit_category() {
  FinCat u;
  u.objects = {Value::name("*")};
  u.mors = {{Value::name("id_*"), 0, 0}};
  u.identity = {0};
  u.reset_tables();
  u.set_compose(0, 0, 0);
  u.finalize();
  return u;
}

void validate_functor(const FinCat& c, const SetFunctor& f, const std::string& name) {
  auto fail = [&](const std::string& msg) { throw Error(ErrorKind::Model, name + ": " + msg); };
  if (f.sets.size() != static_cast<size_t>(c.nobj()) || f.maps.size() != static_cast<size_t>(c.nmor()))
    fail("table size does not match its category");
  for (int m = 0; m < c.nmor(); ++m) {
    const auto& mp = f.maps[m];
    const FinSet& src = f.sets[c.mors[m].src];
    const FinSet& dst = f.sets[c.mors[m].dst];
    if (mp.size() != src.size()) fail("action of " + c.mors[m].name.to_string() + " is not total");
    for (int v : mp)
      if (v < 0 || v >= static_cast<int>(dst.size()))
        fail("action of " + c.mors[m].name.to_string() + " leaves its target set");
    if (c.is_identity(m))
      for (size_t i = 0; i < mp.size(); ++i)
        if (mp[i] != static_cast<int>(i)) fail("identity " + c.mors[m].name.to_string() + " acts non-trivially");
  }
  for (int g = 0; g < c.nmor(); ++g)
    for (int h = 0; h < c.nmor(); ++h) {
      int k = c.compose(g, h);
      if (k < 0) continue;
      const auto& mg = f.maps[g];
      for (size_t i = 0; i < mg.size(); ++i)
        if (f.maps[h][mg[i]] != f.maps[k][i])
          fail("action does not preserve the composite of (" + c.mors[g].name.to_string() + ", " +
               c.mors[h].name.to_string() + ")");
    }
}

Cat slot_cat(const Slot& s) { return s.pol == Polarity::Pos ? s.cat : normalize(cat_op(s.cat)); }

static Cat slots_expr(const std::vector<Slot>& slots) {
  if (slots.empty()) return cat_unit();
  Cat acc = slot_cat(slots.back());
  for (size_t i = slots.size() - 1; i-- > 0;) acc = cat_prod(slot_cat(slots[i]), acc);
  return acc;
}

const FinCat& Model::cat(const Cat& c) const {
  std::string key = to_string(c);
  auto it = cache_.find(key);
  if (it != cache_.end()) return *it->second;
  std::shared_ptr<FinCat> fc;
  switch (c->kind) {
    case CatNode::Kind::Base: {
      auto b = bases.find(c->name);
      if (b == bases.end()) throw Error(ErrorKind::Model, "model " + name + " has no category " + c->name);
      fc = std::make_shared<FinCat>(b->second);
      break;
    }
    case CatNode::Kind::Op:
      fc = std::make_shared<FinCat>(opposite(cat(c->left)));
      break;
    case CatNode::Kind::Prod:
      fc = std::make_shared<FinCat>(product(cat(c->left), cat(c->right)));
      break;
    case CatNode::Kind::Unit:
      fc = std::make_shared<FinCat>(unit_category());
      break;
  }
  cache_[key] = fc;
  return *fc;
}

const FinCat& Model::slot_product(const std::vector<Slot>& slots) const { return cat(slots_expr(slots)); }

void Model::validate() const {
  for (auto& [n, c] : bases) c.validate(n);
  for (auto& [n, a] : atoms) validate_functor(slot_product(a.slots), a.fun, "atom " + n);
  for (auto& [n, f] : functors) {
    const FinCat& d = cat(f.dom);
    const FinCat& c = cat(f.cod);
    auto fail = [&](const std::string& msg) { throw Error(ErrorKind::Model, "functor " + n + ": " + msg); };
    if (f.obj.size() != static_cast<size_t>(d.nobj()) || f.mor.size() != static_cast<size_t>(d.nmor()))
      fail("table size does not match its domain");
    for (int o : f.obj)
      if (o < 0 || o >= c.nobj()) fail("object image out of range");
    for (int m = 0; m < d.nmor(); ++m) {
      int fm = f.mor[m];
      if (fm < 0 || fm >= c.nmor()) fail("morphism image out of range");
      if (c.mors[fm].src != f.obj[d.mors[m].src] || c.mors[fm].dst != f.obj[d.mors[m].dst])
        fail("image of " + d.mors[m].name.to_string() + " has wrong endpoints");
      if (d.is_identity(m) && !c.is_identity(fm)) fail("identity " + d.mors[m].name.to_string() + " not preserved");
    }
    for (int g = 0; g < d.nmor(); ++g)
      for (int h = 0; h < d.nmor(); ++h) {
        int k = d.compose(g, h);
        if (k >= 0 && c.compose(f.mor[g], f.mor[h]) != f.mor[k])
          fail("composite of (" + d.mors[g].name.to_string() + ", " + d.mors[h].name.to_string() + ") not preserved");
      }
  }
}

void Model::check_covers(const Signature& sig) const {
  for (auto& c : sig.categories)
    if (!bases.count(c)) throw Error(ErrorKind::Model, "model " + name + " does not interpret category " + c);
  for (auto& [n, a] : sig.atoms) {
    auto it = atoms.find(n);
    if (it == atoms.end()) throw Error(ErrorKind::Model, "model " + name + " does not interpret atom " + n);
    const auto& ms = it->second.slots;
    bool same = ms.size() == a.slots.size();
    for (size_t i = 0; same && i < ms.size(); ++i)
      same = cat_equal(normalize(ms[i].cat), normalize(a.slots[i].cat)) && ms[i].pol == a.slots[i].pol;
    if (!same) throw Error(ErrorKind::Model, "model " + name + ": atom " + n + " has a different signature");
  }
  for (auto& [n, f] : sig.functors) {
    auto it = functors.find(n);
    if (it == functors.end()) throw Error(ErrorKind::Model, "model " + name + " does not interpret functor " + n);
    if (!cat_equal(normalize(it->second.dom), normalize(f.dom)) || !cat_equal(normalize(it->second.cod), normalize(f.cod)))
      throw Error(ErrorKind::Model, "model " + name + ": functor " + n + " has a different type");
  }
}

}  // namespace dinat
