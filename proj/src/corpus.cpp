#include "dinat/corpus.hpp"

#include <filesystem>
#include <sstream>

#include "dinat/gen.hpp"
#include "dinat/model_io.hpp"

namespace dinat {

std::vector<CorpusEntry> parse_manifest(const std::string& manifest,
                                        const std::vector<std::pair<std::string, std::string>>& files) {
  std::vector<CorpusEntry> out;
  std::istringstream in(manifest);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto c = line.find(';'); c != std::string::npos) line.resize(c);
    std::istringstream ls(line);
    std::string name, file, pol;
    if (!(ls >> name)) continue;
    if (!(ls >> file >> pol) || (pol != "positive" && pol != "negative"))
      throw Error(ErrorKind::Parse, "MANIFEST", std::to_string(lineno) + ":1: expected 'name file positive|negative'");
    CorpusEntry e;
    e.name = name;
    e.file = file;
    e.positive = pol == "positive";
    bool found = false;
    for (auto& [fn, text] : files)
      if (fn == file) {
        e.text = text;
        found = true;
      }
    if (!found) throw Error(ErrorKind::Io, "MANIFEST names a missing file " + file);
    out.push_back(e);
  }
  return out;
}

std::vector<CorpusEntry> corpus_entries() { return parse_manifest(corpus_manifest(), corpus_files()); }

std::vector<CorpusEntry> load_corpus(const std::string& dir) {
  namespace fs = std::filesystem;
  std::string manifest = read_file((fs::path(dir) / "MANIFEST").string());
  std::vector<std::pair<std::string, std::string>> files;
  std::error_code ec;
  for (auto& de : fs::directory_iterator(dir, ec))
    if (de.path().extension() == ".dinat") files.emplace_back(de.path().filename().string(), read_file(de.path().string()));
  if (ec) throw Error(ErrorKind::Io, "cannot list " + dir);
  return parse_manifest(manifest, files);
}

// ---- model suite ----

Signature suite_signature() {
  Signature s;
  s.categories = {"C", "D"};
  Cat c = cat_base("C"), d = cat_base("D");
  auto pos = [](Cat x) { return Slot{x, Polarity::Pos}; };
  auto neg = [](Cat x) { return Slot{x, Polarity::Neg}; };
  for (auto n : {"A", "B", "G", "P"}) s.atoms[n] = AtomSig{{pos(c)}};
  s.atoms["H"] = AtomSig{{pos(d)}};
  for (auto n : {"R", "W", "X"}) s.atoms[n] = AtomSig{{neg(c), pos(c)}};
  for (auto n : {"Y", "Z"}) s.atoms[n] = AtomSig{{neg(c), pos(d)}};
  s.atoms["E"] = AtomSig{{neg(d), pos(d)}};
  s.atoms["S"] = AtomSig{{neg(c), pos(c), neg(d), pos(d)}};
  s.atoms["T"] = AtomSig{};
  s.atoms["U"] = AtomSig{};
  s.functors["F"] = FunctorSig{c, d};
  return s;
}

namespace {

// Functor on c^op * c of the given kind: 0 hom, 1 presheaf times copresheaf,
// 2 random, 3 constant.
SetFunctor mixed(const FinCat& c, int kind, int max_size, Rng& rng) {
  FinCat op = opposite(c);
  switch (kind) {
    case 0: return hom_functor(c);
    case 1: {
      SetFunctor l = random_functor(op, rng, 1);
      SetFunctor r = random_functor(c, rng, max_size);
      return functor_product(op, l, c, r);
    }
    case 2: return random_functor(product(op, c), rng, max_size);
    default: return constant_functor(product(op, c), max_size);
  }
}

Model suite_model(const std::string& shape, int shape_ix, const FinCat& base, int interp) {
  Rng rng(0x5EED0000ULL + static_cast<std::uint64_t>(shape_ix) * 16 + static_cast<std::uint64_t>(interp));
  Model m;
  m.name = shape + "-" + std::to_string(interp);
  m.bases["C"] = base;
  m.bases["D"] = base;
  Signature sig = suite_signature();
  int size1 = interp + 1;  // copresheaf sizes up to 1, 2, 3
  auto put = [&](const std::string& n, SetFunctor f) {
    AtomTable a;
    a.slots = sig.atoms[n].slots;
    a.fun = std::move(f);
    m.atoms[n] = a;
  };
  for (auto n : {"A", "B", "G", "P"}) put(n, random_functor(base, rng, size1));
  put("H", random_functor(base, rng, size1));
  const int kinds[6][3] = {{0, 2, 1}, {2, 0, 3}, {0, 1, 2}, {2, 0, 1}, {1, 2, 0}, {0, 2, 1}};
  const char* mixed_names[6] = {"R", "W", "X", "Y", "Z", "E"};
  for (int i = 0; i < 6; ++i) put(mixed_names[i], mixed(base, kinds[i][interp % 3], 2, rng));
  FinCat op = opposite(base);
  FinCat cc = product(op, base);
  SetFunctor hom = hom_functor(base);
  SetFunctor small = interp == 0 ? constant_functor(cc, 1) : random_functor(cc, rng, 1);
  put("S", interp == 1 ? functor_product(cc, small, cc, hom) : functor_product(cc, hom, cc, small));
  FinCat unit = unit_category();
  const int tsize[3] = {1, 2, 1}, usize[3] = {2, 1, 3};
  put("T", constant_functor(unit, tsize[interp % 3]));
  put("U", constant_functor(unit, usize[interp % 3]));
  FunctorTable f;
  f.dom = cat_base("C");
  f.cod = cat_base("D");
  for (int o = 0; o < base.nobj(); ++o) f.obj.push_back(o);
  for (int k = 0; k < base.nmor(); ++k) f.mor.push_back(k);
  if (interp == 1 && base.nobj() > 0) {
    int last = base.nobj() - 1;
    for (auto& o : f.obj) o = last;
    for (auto& k : f.mor) k = base.identity[last];
  }
  m.functors["F"] = f;
  m.validate();
  return m;
}

}  // namespace

std::vector<Model> model_suite() {
  std::vector<Model> out;
  struct Shape {
    std::string name;
    FinCat cat;
    int interps;
  };
  std::vector<Shape> shapes = {{"arrow", walking_arrow(), 3},       {"discrete", discrete_category(2), 2},
                               {"chain", chain3(), 3},              {"monoid", idempotent_monoid(), 2},
                               {"empty", empty_category(), 2}};
  for (size_t k = 0; k < shapes.size(); ++k)
    for (int i = 0; i < shapes[k].interps; ++i)
      out.push_back(suite_model(shapes[k].name, static_cast<int>(k), shapes[k].cat, i));
  return out;
}

// ---- running entries ----

std::vector<PropertyResult> run_entry(const CorpusEntry& e, const std::vector<Model>& models,
                                      const VerifyOptions& opt) {
  std::vector<PropertyResult> out;
  auto add = [&](const std::string& prop, Outcome oc, const std::string& detail) {
    out.push_back({e.name, "-", prop, oc, 0, detail});
  };
  DerivationFile f;
  try {
    f = parse_derivation(e.text, e.file);
  } catch (const Error& err) {
    add("parse", Outcome::Fail, err.what());
    return out;
  }
  bool all_ok = true;
  for (auto& r : check_file(f)) {
    const Rejection* rej = nullptr;
    if (!e.positive)
      for (auto& x : f.rejects)
        if (x.name == r.deriv) rej = &x;
    if (rej) {
      if (r.error && r.error->kind == rej->kind)
        add("reject:" + r.deriv, Outcome::Pass, r.error->what());
      else
        add("reject:" + r.deriv, Outcome::Fail,
            r.error ? std::string("rejected with ") + r.error->what()
                    : std::string("expected ") + kind_name(rej->kind) + " but it checks");
      continue;
    }
    if (r.error) {
      all_ok = false;
      add("check:" + r.deriv, Outcome::Fail, r.error->what());
    } else {
      add("check:" + r.deriv, Outcome::Pass, to_string(*r.concl));
    }
  }
  if (!e.positive) {
    for (auto& x : f.rejects)
      if (!f.find(x.name)) add("reject:" + x.name, Outcome::Fail, "no such derivation");
    return out;
  }
  if (!all_ok) return out;
  for (auto& m : models) {
    auto rs = verify_file(f, e.name, m, opt);
    out.insert(out.end(), rs.begin(), rs.end());
  }
  return out;
}

}  // namespace dinat
