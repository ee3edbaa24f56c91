#include "dinat/gen.hpp"

#include <algorithm>
#include <numeric>

#include "dinat/model_io.hpp"
#include "dinat/textio.hpp"
#include "json.hpp"

namespace dinat {

FinCat walking_arrow() { return make_category({"a", "b"}, {{"f", "a", "b"}}, {}, "C"); }

FinCat discrete_category(int n) {
  std::vector<std::string> objs;
  for (int i = 0; i < n; ++i) objs.push_back(std::string(1, static_cast<char>('a' + i)));
  return make_category(objs, {}, {}, "C");
}

FinCat chain3() {
  return make_category({"a", "b", "c"}, {{"f", "a", "b"}, {"g", "b", "c"}, {"h", "a", "c"}}, {{"f", "g", "h"}}, "C");
}

FinCat idempotent_monoid() { return make_category({"o"}, {{"s", "o", "o"}}, {{"s", "s", "s"}}, "C"); }

FinCat parallel_pair() { return make_category({"a", "b"}, {{"f", "a", "b"}, {"g", "a", "b"}}, {}, "C"); }

FinCat empty_category() { return make_category({}, {}, {}, "C"); }

namespace {

int uniform(Rng& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }

FinCat random_poset(Rng& rng) {
  int n = uniform(rng, 1, 3);
  std::vector<std::string> objs;
  for (int i = 0; i < n; ++i) objs.push_back(std::string(1, static_cast<char>('a' + i)));
  // random relation on a linear order, transitively closed
  std::vector<std::vector<bool>> le(n, std::vector<bool>(n, false));
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) le[i][j] = uniform(rng, 0, 1) == 1;
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        if (le[i][k] && le[k][j]) le[i][j] = true;
  std::vector<MorSpec> mors;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (le[i][j]) mors.push_back({objs[i] + objs[j], objs[i], objs[j]});
  std::vector<CompSpec> comps;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        if (le[i][j] && le[j][k]) comps.push_back({objs[i] + objs[j], objs[j] + objs[k], objs[i] + objs[k]});
  return make_category(objs, mors, comps, "C");
}

FinCat random_monoid(Rng& rng) {
  int k = uniform(rng, 1, 2);  // non-identity elements
  std::vector<std::string> names = {"s", "t"};
  names.resize(k);
  std::vector<std::string> all = {"id_o"};
  all.insert(all.end(), names.begin(), names.end());
  for (int attempt = 0; attempt < 200; ++attempt) {
    std::vector<CompSpec> comps;
    std::vector<int> table(k * k);
    for (auto& t : table) t = uniform(rng, 0, k);
    // element indices: 0 = id, 1.. = names
    auto mul = [&](int x, int y) { return x == 0 ? y : y == 0 ? x : table[(x - 1) * k + (y - 1)]; };
    bool assoc = true;
    for (int x = 0; x <= k && assoc; ++x)
      for (int y = 0; y <= k && assoc; ++y)
        for (int z = 0; z <= k && assoc; ++z) assoc = mul(mul(x, y), z) == mul(x, mul(y, z));
    if (!assoc) continue;
    std::vector<MorSpec> mors;
    for (auto& n : names) mors.push_back({n, "o", "o"});
    for (int x = 1; x <= k; ++x)
      for (int y = 1; y <= k; ++y) comps.push_back({all[x], all[y], all[mul(x, y)]});
    return make_category({"o"}, mors, comps, "C");
  }
  return idempotent_monoid();
}

Elems numbered(int n) {
  Elems es;
  for (int i = 0; i < n; ++i) es.push_back(Value::name(std::to_string(i)));
  std::sort(es.begin(), es.end());
  return es;
}

}  // namespace

FinCat random_category(Rng& rng) {
  switch (uniform(rng, 0, 5)) {
    case 0: return walking_arrow();
    case 1: return discrete_category(uniform(rng, 1, 2));
    case 2: return chain3();
    case 3: return random_monoid(rng);
    case 4: return parallel_pair();
    default: return random_poset(rng);
  }
}

SetFunctor constant_functor(const FinCat& c, int n) {
  SetFunctor f;
  f.sets.assign(c.nobj(), FinSet{numbered(n)});
  std::vector<int> id(n);
  std::iota(id.begin(), id.end(), 0);
  f.maps.assign(c.nmor(), id);
  return f;
}

SetFunctor random_functor(const FinCat& c, Rng& rng, int max_size, int tries) {
  std::vector<int> degree(c.nmor(), 0);
  for (int f = 0; f < c.nmor(); ++f)
    for (int g = 0; g < c.nmor(); ++g) {
      int h = c.compose(f, g);
      if (h >= 0 && !c.is_identity(f) && !c.is_identity(g)) ++degree[h];
    }
  std::vector<int> order;
  for (int m = 0; m < c.nmor(); ++m)
    if (!c.is_identity(m)) order.push_back(m);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return degree[a] < degree[b]; });

  for (int attempt = 0; attempt < tries; ++attempt) {
    SetFunctor f;
    std::vector<int> sizes(c.nobj());
    for (auto& s : sizes) s = uniform(rng, 0, max_size);
    for (int s : sizes) f.sets.push_back(FinSet{numbered(s)});
    f.maps.assign(c.nmor(), {});
    std::vector<bool> known(c.nmor(), false);
    for (int o = 0; o < c.nobj(); ++o) {
      std::vector<int> id(sizes[o]);
      std::iota(id.begin(), id.end(), 0);
      f.maps[c.identity[o]] = id;
      known[c.identity[o]] = true;
    }
    bool ok = true;
    auto close = [&]() {
      bool changed = true;
      while (changed && ok) {
        changed = false;
        for (int g = 0; g < c.nmor() && ok; ++g) {
          if (!known[g]) continue;
          for (int h = 0; h < c.nmor() && ok; ++h) {
            if (!known[h]) continue;
            int k = c.compose(g, h);
            if (k < 0) continue;
            std::vector<int> m(f.maps[g].size());
            for (size_t i = 0; i < m.size(); ++i) m[i] = f.maps[h][f.maps[g][i]];
            if (!known[k]) {
              f.maps[k] = m;
              known[k] = true;
              changed = true;
            } else if (f.maps[k] != m) {
              ok = false;
            }
          }
        }
      }
    };
    for (int m : order) {
      close();
      if (!ok) break;
      if (known[m]) continue;
      int dst = sizes[c.mors[m].dst];
      int src = sizes[c.mors[m].src];
      if (dst == 0 && src > 0) {
        ok = false;
        break;
      }
      std::vector<int> mp(src);
      for (auto& x : mp) x = uniform(rng, 0, dst - 1);
      f.maps[m] = mp;
      known[m] = true;
    }
    if (ok) close();
    if (!ok) continue;
    try {
      validate_functor(c, f, "random functor");
      return f;
    } catch (const Error&) {
    }
  }
  return constant_functor(c, std::min(1, max_size));
}

SetFunctor hom_functor(const FinCat& c) {
  // objects of c^op * c are x * n + y, morphisms u * m + v
  SetFunctor f;
  int n = c.nobj(), m = c.nmor();
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y) f.sets.push_back(c.hom(x, y));
  f.maps.assign(static_cast<size_t>(m) * m, {});
  for (int u = 0; u < m; ++u)
    for (int v = 0; v < m; ++v) {
      // u : x' -> x in c, acting from (x, y) to (x', y')
      int x = c.mors[u].dst, y = c.mors[v].src, y2 = c.mors[v].dst;
      int x2 = c.mors[u].src;
      std::vector<int> mp;
      for (int g : c.hom_mors(x, y)) {
        int r = c.compose(c.compose(u, g), v);
        mp.push_back(c.hom(x2, y2).index_of(c.mors[r].name));
      }
      f.maps[static_cast<size_t>(u) * m + v] = mp;
    }
  return f;
}

SetFunctor functor_product(const FinCat& a, const SetFunctor& f, const FinCat& b, const SetFunctor& g) {
  SetFunctor p;
  // per object: sorted pairs and the index of (i, j) in the sorted order
  std::vector<std::vector<int>> where;
  for (int x = 0; x < a.nobj(); ++x)
    for (int y = 0; y < b.nobj(); ++y) {
      const FinSet& s = f.sets[x];
      const FinSet& t = g.sets[y];
      Elems es;
      for (auto& e : s.elems)
        for (auto& d : t.elems) es.push_back(Value::tuple({e, d}));
      Elems sorted = es;
      std::sort(sorted.begin(), sorted.end());
      FinSet fs{sorted};
      std::vector<int> w;
      for (auto& e : es) w.push_back(fs.index_of(e));
      p.sets.push_back(fs);
      where.push_back(w);
    }
  int nb = b.nobj();
  for (int u = 0; u < a.nmor(); ++u)
    for (int v = 0; v < b.nmor(); ++v) {
      int src = a.mors[u].src * nb + b.mors[v].src;
      int dst = a.mors[u].dst * nb + b.mors[v].dst;
      int ts = static_cast<int>(g.sets[b.mors[v].src].size());
      int td = static_cast<int>(g.sets[b.mors[v].dst].size());
      std::vector<int> mp(p.sets[src].size());
      for (int i = 0; i < static_cast<int>(f.sets[a.mors[u].src].size()); ++i)
        for (int j = 0; j < ts; ++j) {
          int to = f.maps[u][i] * td + g.maps[v][j];
          mp[where[src][i * ts + j]] = where[dst][to];
        }
      p.maps.push_back(mp);
    }
  return p;
}

// ---- composition failure search ----

namespace {

Signature mixed_signature() {
  Signature sig;
  sig.categories = {"C"};
  Cat c = cat_base("C");
  for (auto n : {"P", "Q", "R"}) sig.atoms[n] = AtomSig{{{c, Polarity::Neg}, {c, Polarity::Pos}}};
  return sig;
}

Sequent mixed_sequent(const std::string& from, const std::string& to) {
  Sequent s;
  s.ctx = {{"x", cat_base("C")}};
  s.hyps = {{"p", atom(from, {var("x", Polarity::Neg), var("x")})}};
  s.goal = atom(to, {var("x", Polarity::Neg), var("x")});
  return s;
}

SetFunctor random_difunctor(const FinCat& opc, Rng& rng) {
  switch (uniform(rng, 0, 3)) {
    case 0: return hom_functor(opposite(opc));
    case 1: {
      const FinCat& c = opc;
      FinCat cc = opposite(opc);
      SetFunctor l = random_functor(c, rng, 2);
      SetFunctor r = random_functor(cc, rng, 2);
      return functor_product(c, l, cc, r);
    }
    default: return random_functor(product(opc, opposite(opc)), rng, 2);
  }
}

}  // namespace

std::optional<CompositionWitness> search_composition_failure(std::uint64_t seed, int models,
                                                             CompositionSearchStats* stats) {
  Signature sig = mixed_signature();
  std::optional<CompositionWitness> found;
  for (int i = 0; i < models; ++i) {
    Rng rng(seed + static_cast<std::uint64_t>(i) * 0x9E3779B97F4A7C15ULL);
    Model m;
    m.name = "random-" + std::to_string(seed) + "-" + std::to_string(i);
    m.bases["C"] = random_category(rng);
    FinCat opc = opposite(m.bases["C"]);
    for (auto n : {"P", "Q", "R"}) {
      AtomTable a;
      a.slots = sig.atoms[n].slots;
      a.fun = random_difunctor(opc, rng);
      m.atoms[n] = a;
    }
    m.validate();
    if (stats) ++stats->models;
    if (found) continue;
    Evaluator ev(m, sig);
    EnumOptions opt;
    opt.limit = 32;
    opt.max_nodes = 200000;
    std::vector<DinatFamily> as, bs;
    try {
      as = enumerate_dinaturals(ev, mixed_sequent("P", "Q"), opt);
      bs = enumerate_dinaturals(ev, mixed_sequent("Q", "R"), opt);
    } catch (const Error& e) {
      if (e.kind == ErrorKind::BoundExceeded) continue;
      throw;
    }
    for (auto& a : as) {
      for (auto& b : bs) {
        if (stats) ++stats->pairs;
        DinatFamily c = compose_pointwise(ev, a, b);
        if (auto f = hexagon_failure(ev, c)) {
          found = CompositionWitness{seed, i, m, a, b, *f};
          break;
        }
      }
      if (found) break;
    }
  }
  return found;
}

namespace {

using json = nlohmann::ordered_json;

json family_json(const DinatFamily& f) {
  json t = json::array();
  for (auto& row : f.table) {
    json r = json::array();
    for (auto& v : row) r.push_back(v.to_string());
    t.push_back(r);
  }
  return {{"sequent", to_string(f.seq)}, {"table", t}};
}

DinatFamily family_from(const json& j) {
  DinatFamily f;
  f.seq = parse_sequent(j.at("sequent").get<std::string>());
  for (auto& r : j.at("table")) {
    std::vector<Value> row;
    for (auto& v : r) row.push_back(parse_value(v.get<std::string>()));
    f.table.push_back(row);
  }
  return f;
}

}  // namespace

std::string witness_to_json(const CompositionWitness& w) {
  json j;
  j["seed"] = w.seed;
  j["model_index"] = w.model_index;
  j["model"] = json::parse(model_to_json(w.model));
  j["alpha"] = family_json(w.alpha);
  j["beta"] = family_json(w.beta);
  json at = json::array();
  for (int o : w.failure.at) at.push_back(o);
  j["failure"] = {{"var", w.failure.var},   {"morphism", w.failure.morphism}, {"at", at},
                  {"input", w.failure.input}, {"lhs", w.failure.lhs},         {"rhs", w.failure.rhs}};
  return j.dump(2) + "\n";
}

CompositionWitness witness_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
    CompositionWitness w;
    w.seed = j.at("seed").get<std::uint64_t>();
    w.model_index = j.at("model_index").get<int>();
    w.model = parse_model(j.at("model").dump(), "witness");
    w.alpha = family_from(j.at("alpha"));
    w.beta = family_from(j.at("beta"));
    const json& f = j.at("failure");
    w.failure.var = f.at("var").get<std::string>();
    w.failure.morphism = f.at("morphism").get<std::string>();
    for (auto& o : f.at("at")) w.failure.at.push_back(o.get<int>());
    w.failure.input = f.at("input").get<std::string>();
    w.failure.lhs = f.at("lhs").get<std::string>();
    w.failure.rhs = f.at("rhs").get<std::string>();
    return w;
  } catch (const json::exception& e) {
    throw Error(ErrorKind::Model, std::string("malformed witness: ") + e.what());
  }
}

}  // namespace dinat
