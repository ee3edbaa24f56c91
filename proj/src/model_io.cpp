#include "dinat/model_io.hpp"

#include <fstream>
#include <sstream>

#include "dinat/textio.hpp"
#include "json.hpp"

namespace dinat {

using json = nlohmann::ordered_json;

namespace {

[[noreturn]] void bad(const std::string& src, const std::string& msg) {
  throw Error(ErrorKind::Model, (src.empty() ? "" : src + ": ") + msg);
}

const json& field(const json& j, const char* key, const std::string& where) {
  if (!j.is_object() || !j.contains(key)) throw Error(ErrorKind::Model, where + ": missing field '" + key + "'");
  return j.at(key);
}

std::string str(const json& j, const std::string& where) {
  if (!j.is_string()) throw Error(ErrorKind::Model, where + ": expected a string");
  return j.get<std::string>();
}

FinCat load_category(const json& j, const std::string& name) {
  std::string w = "category " + name;
  std::vector<std::string> objs;
  for (auto& o : field(j, "objects", w)) objs.push_back(str(o, w));
  std::vector<MorSpec> mors;
  if (j.contains("morphisms"))
    for (auto& m : j.at("morphisms"))
      mors.push_back({str(field(m, "name", w), w), str(field(m, "src", w), w), str(field(m, "dst", w), w)});
  std::vector<CompSpec> comps;
  if (j.contains("composition"))
    for (auto& c : j.at("composition"))
      comps.push_back({str(field(c, "first", w), w), str(field(c, "second", w), w), str(field(c, "result", w), w)});
  std::map<std::string, std::string> ids;
  if (j.contains("identities"))
    for (auto& [k, v] : j.at("identities").items()) ids[k] = str(v, w);
  return make_category(objs, mors, comps, name, ids);
}

int object_of(const FinCat& c, const std::string& s, const std::string& where) {
  int i = c.obj_index(parse_value(s));
  if (i < 0) throw Error(ErrorKind::Model, where + ": unknown object " + s);
  return i;
}

int morphism_of(const FinCat& c, const std::string& s, const std::string& where) {
  int i = c.mor_index(parse_value(s));
  if (i < 0) throw Error(ErrorKind::Model, where + ": unknown morphism " + s);
  return i;
}

// Index of an object tuple in the slot product (row-major).
int tuple_index(const std::vector<const FinCat*>& cs, const json& at, const std::string& where) {
  if (!at.is_array() || at.size() != cs.size())
    throw Error(ErrorKind::Model, where + ": expected " + std::to_string(cs.size()) + " objects");
  int o = 0;
  for (size_t i = 0; i < cs.size(); ++i) o = o * cs[i]->nobj() + object_of(*cs[i], str(at[i], where), where);
  return o;
}

std::vector<int> split(int idx, const std::vector<int>& radix) {
  std::vector<int> out(radix.size());
  for (size_t i = radix.size(); i-- > 0;) {
    out[i] = idx % radix[i];
    idx /= radix[i];
  }
  return out;
}

int join(const std::vector<int>& xs, const std::vector<int>& radix) {
  int o = 0;
  for (size_t i = 0; i < xs.size(); ++i) o = o * radix[i] + xs[i];
  return o;
}

AtomTable load_atom(const Model& m, const json& j, const std::string& name) {
  std::string w = "atom " + name;
  AtomTable a;
  for (auto& s : field(j, "slots", w)) {
    std::string pol = str(field(s, "pol", w), w);
    if (pol != "+" && pol != "-") bad(w, "slot polarity must be + or -");
    a.slots.push_back({normalize(parse_cat(str(field(s, "cat", w), w))), pol == "+" ? Polarity::Pos : Polarity::Neg});
  }
  std::vector<const FinCat*> cs;
  std::vector<int> nobj, nmor;
  for (auto& s : a.slots) {
    cs.push_back(&m.cat(slot_cat(s)));
    nobj.push_back(cs.back()->nobj());
    nmor.push_back(cs.back()->nmor());
  }
  const FinCat& pi = m.slot_product(a.slots);
  a.fun.sets.assign(pi.nobj(), FinSet{});
  std::vector<bool> seen(pi.nobj(), false);
  if (j.contains("sets"))
    for (auto& s : j.at("sets")) {
      int o = tuple_index(cs, field(s, "at", w), w);
      if (seen[o]) bad(w, "set given twice at " + pi.objects[o].to_string());
      seen[o] = true;
      Elems es;
      for (auto& e : field(s, "elems", w)) es.push_back(parse_value(str(e, w)));
      std::sort(es.begin(), es.end());
      if (std::adjacent_find(es.begin(), es.end()) != es.end())
        bad(w, "duplicate element at " + pi.objects[o].to_string());
      a.fun.sets[o].elems = es;
    }
  // generating actions: (slot, slot morphism, source object) -> map
  std::map<std::tuple<int, int, int>, std::vector<int>> gen;
  if (j.contains("actions"))
    for (auto& act : j.at("actions")) {
      int slot = field(act, "slot", w).get<int>();
      if (slot < 0 || slot >= static_cast<int>(cs.size())) bad(w, "action slot out of range");
      int mi = morphism_of(*cs[slot], str(field(act, "mor", w), w), w);
      int src = tuple_index(cs, field(act, "from", w), w);
      auto so = split(src, nobj);
      if (cs[slot]->mors[mi].src != so[slot])
        bad(w, "action of " + cs[slot]->mors[mi].name.to_string() + " does not start at " +
                   pi.objects[src].to_string());
      auto to = so;
      to[slot] = cs[slot]->mors[mi].dst;
      int dst = join(to, nobj);
      const FinSet& from = a.fun.sets[src];
      const FinSet& into = a.fun.sets[dst];
      std::vector<int> map(from.size(), -1);
      for (auto& [k, v] : field(act, "map", w).items()) {
        int x = from.index_of(parse_value(k)), y = into.index_of(parse_value(str(v, w)));
        if (x < 0 || y < 0)
          bad(w, "action of " + cs[slot]->mors[mi].name.to_string() + " at " + pi.objects[src].to_string() +
                     " maps " + k + " outside its sets");
        map[x] = y;
      }
      for (int x : map)
        if (x < 0)
          bad(w, "action of " + cs[slot]->mors[mi].name.to_string() + " at " + pi.objects[src].to_string() +
                     " is not total");
      if (!gen.emplace(std::make_tuple(slot, mi, src), map).second) bad(w, "action given twice");
    }
  a.fun.maps.assign(pi.nmor(), {});
  for (int mi = 0; mi < pi.nmor(); ++mi) {
    auto ms = split(mi, nmor);
    int src = pi.mors[mi].src;
    auto cur = split(src, nobj);
    std::vector<int> map(a.fun.sets[src].size());
    for (size_t x = 0; x < map.size(); ++x) map[x] = static_cast<int>(x);
    for (size_t s = 0; s < ms.size(); ++s) {
      if (cs[s]->is_identity(ms[s])) continue;
      int at = join(cur, nobj);
      auto it = gen.find(std::make_tuple(static_cast<int>(s), ms[s], at));
      if (it == gen.end()) {
        if (a.fun.sets[at].size() == 0) {
          cur[s] = cs[s]->mors[ms[s]].dst;
          continue;
        }
        bad(w, "missing action of " + cs[s]->mors[ms[s]].name.to_string() + " on slot " + std::to_string(s) +
                   " at " + pi.objects[at].to_string());
      }
      for (auto& x : map) x = it->second[x];
      cur[s] = cs[s]->mors[ms[s]].dst;
    }
    a.fun.maps[mi] = map;
  }
  return a;
}

FunctorTable load_functor(const Model& m, const json& j, const std::string& name) {
  std::string w = "functor " + name;
  FunctorTable f;
  f.dom = normalize(parse_cat(str(field(j, "dom", w), w)));
  f.cod = normalize(parse_cat(str(field(j, "cod", w), w)));
  const FinCat& d = m.cat(f.dom);
  const FinCat& c = m.cat(f.cod);
  f.obj.assign(d.nobj(), -1);
  f.mor.assign(d.nmor(), -1);
  for (auto& [k, v] : field(j, "objects", w).items()) f.obj[object_of(d, k, w)] = object_of(c, str(v, w), w);
  for (int o = 0; o < d.nobj(); ++o)
    if (f.obj[o] < 0) bad(w, "no image for object " + d.objects[o].to_string());
  if (j.contains("morphisms"))
    for (auto& [k, v] : j.at("morphisms").items()) f.mor[morphism_of(d, k, w)] = morphism_of(c, str(v, w), w);
  for (int mi = 0; mi < d.nmor(); ++mi) {
    if (f.mor[mi] >= 0) continue;
    if (d.is_identity(mi)) {
      f.mor[mi] = c.identity[f.obj[d.mors[mi].src]];
      continue;
    }
    bad(w, "no image for morphism " + d.mors[mi].name.to_string());
  }
  return f;
}

}  // namespace

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::Io, "cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Model parse_model(const std::string& text, const std::string& source) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    bad(source, std::string("malformed JSON: ") + e.what());
  }
  try {
    Model m;
    m.name = j.contains("name") ? str(j.at("name"), "model") : source;
    if (j.contains("categories"))
      for (auto& [n, c] : j.at("categories").items()) m.bases[n] = load_category(c, n);
    if (j.contains("objects")) {
      if (m.bases.count("C")) bad(source, "category C given twice");
      m.bases["C"] = load_category(j, "C");
    }
    if (j.contains("functors"))
      for (auto& [n, f] : j.at("functors").items()) m.functors[n] = load_functor(m, f, n);
    if (j.contains("atoms"))
      for (auto& [n, a] : j.at("atoms").items()) m.atoms[n] = load_atom(m, a, n);
    m.validate();
    return m;
  } catch (const Error& e) {
    if (e.kind == ErrorKind::Model && !source.empty() && e.message.rfind(source, 0) != 0)
      throw Error(ErrorKind::Model, source + ": " + e.message);
    if (e.kind == ErrorKind::Parse) throw Error(ErrorKind::Model, source + ": " + e.message);
    throw;
  } catch (const json::exception& e) {
    bad(source, std::string("malformed model: ") + e.what());
  }
}

Model load_model(const std::string& path) { return parse_model(read_file(path), path); }

std::string model_to_json(const Model& m) {
  json j;
  j["name"] = m.name;
  json cats = json::object();
  for (auto& [n, c] : m.bases) {
    json jc;
    jc["objects"] = json::array();
    for (auto& o : c.objects) jc["objects"].push_back(o.to_string());
    jc["morphisms"] = json::array();
    json ids = json::object();
    bool custom = false;
    for (int o = 0; o < c.nobj(); ++o) {
      std::string id = c.mors[c.identity[o]].name.to_string();
      ids[c.objects[o].to_string()] = id;
      if (id != "id_" + c.objects[o].to_string()) custom = true;
    }
    for (int mi = 0; mi < c.nmor(); ++mi)
      if (!c.is_identity(mi))
        jc["morphisms"].push_back({{"name", c.mors[mi].name.to_string()},
                                   {"src", c.objects[c.mors[mi].src].to_string()},
                                   {"dst", c.objects[c.mors[mi].dst].to_string()}});
    jc["composition"] = json::array();
    for (int f = 0; f < c.nmor(); ++f)
      for (int g = 0; g < c.nmor(); ++g) {
        if (c.is_identity(f) || c.is_identity(g) || c.compose(f, g) < 0) continue;
        jc["composition"].push_back({{"first", c.mors[f].name.to_string()},
                                     {"second", c.mors[g].name.to_string()},
                                     {"result", c.mors[c.compose(f, g)].name.to_string()}});
      }
    if (custom) jc["identities"] = ids;
    cats[n] = jc;
  }
  j["categories"] = cats;
  json funs = json::object();
  for (auto& [n, f] : m.functors) {
    const FinCat& d = m.cat(f.dom);
    const FinCat& c = m.cat(f.cod);
    json jf;
    jf["dom"] = to_string(f.dom);
    jf["cod"] = to_string(f.cod);
    jf["objects"] = json::object();
    for (int o = 0; o < d.nobj(); ++o) jf["objects"][d.objects[o].to_string()] = c.objects[f.obj[o]].to_string();
    jf["morphisms"] = json::object();
    for (int mi = 0; mi < d.nmor(); ++mi)
      if (!d.is_identity(mi)) jf["morphisms"][d.mors[mi].name.to_string()] = c.mors[f.mor[mi]].name.to_string();
    funs[n] = jf;
  }
  j["functors"] = funs;
  json atoms = json::object();
  for (auto& [n, a] : m.atoms) {
    json ja;
    ja["slots"] = json::array();
    std::vector<const FinCat*> cs;
    std::vector<int> nobj, nmor;
    for (auto& s : a.slots) {
      ja["slots"].push_back({{"cat", to_string(s.cat)}, {"pol", pol_sign(s.pol)}});
      cs.push_back(&m.cat(slot_cat(s)));
      nobj.push_back(cs.back()->nobj());
      nmor.push_back(cs.back()->nmor());
    }
    const FinCat& pi = m.slot_product(a.slots);
    auto tuple = [&](int o) {
      json t = json::array();
      auto os = split(o, nobj);
      for (size_t i = 0; i < os.size(); ++i) t.push_back(cs[i]->objects[os[i]].to_string());
      return t;
    };
    ja["sets"] = json::array();
    for (int o = 0; o < pi.nobj(); ++o) {
      json es = json::array();
      for (auto& e : a.fun.sets[o].elems) es.push_back(e.to_string());
      ja["sets"].push_back({{"at", tuple(o)}, {"elems", es}});
    }
    ja["actions"] = json::array();
    for (size_t s = 0; s < cs.size(); ++s)
      for (int mi = 0; mi < cs[s]->nmor(); ++mi) {
        if (cs[s]->is_identity(mi)) continue;
        for (int o = 0; o < pi.nobj(); ++o) {
          auto os = split(o, nobj);
          if (os[s] != cs[s]->mors[mi].src) continue;
          std::vector<int> ms(cs.size());
          for (size_t k = 0; k < cs.size(); ++k) ms[k] = k == s ? mi : cs[k]->identity[os[k]];
          int pm = join(ms, nmor);
          const FinSet& from = a.fun.sets[o];
          if (from.size() == 0) continue;
          const FinSet& into = a.fun.sets[pi.mors[pm].dst];
          json mp = json::object();
          for (size_t x = 0; x < from.size(); ++x)
            mp[from.elems[x].to_string()] = into.elems[a.fun.maps[pm][x]].to_string();
          ja["actions"].push_back(
              {{"slot", s}, {"mor", cs[s]->mors[mi].name.to_string()}, {"from", tuple(o)}, {"map", mp}});
        }
      }
    atoms[n] = ja;
  }
  j["atoms"] = atoms;
  return j.dump(2) + "\n";
}

}  // namespace dinat
