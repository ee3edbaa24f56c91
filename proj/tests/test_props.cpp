#include <doctest.h>

#include "dinat/corpus.hpp"
#include "support.hpp"

using namespace dinat;
using namespace dinat::test;

namespace {

std::vector<Form> random_formulas(std::uint64_t seed, int n) {
  FormulaGen g(seed);
  std::vector<Form> out;
  while (static_cast<int>(out.size()) < n) {
    // closed: quantify the free variable away
    std::string x = "v" + std::to_string(out.size());
    Form body = g.gen(3, Polarity::Pos, {x});
    out.push_back(g.pick(2) ? end_(x, cat_base("C"), body) : coend(x, cat_base("C"), body));
  }
  return out;
}

}  // namespace

TEST_CASE("generated formulas carry their computed polarities") {
  Signature sig = gen_signature();
  for (auto& f : random_formulas(11, 200)) {
    CAPTURE(to_string(f));
    CHECK_NOTHROW(check_formula(f, TypeEnv{}, sig));
  }
}

TEST_CASE("flip is an involution and normalize is idempotent") {
  for (auto& f : random_formulas(12, 200)) {
    CAPTURE(to_string(f));
    CHECK(alpha_equal(flip_form(flip_form(f)), f));
  }
  FormulaGen g(13);
  for (int i = 0; i < 100; ++i) {
    std::vector<Cat> pool{cat_base("C"), cat_base("D"), cat_unit()};
    Cat c = pool[static_cast<size_t>(g.pick(3))];
    for (int k = 0; k < 4; ++k) c = g.pick(2) ? cat_op(c) : cat_prod(c, pool[static_cast<size_t>(g.pick(3))]);
    CAPTURE(to_string(c));
    CHECK(cat_equal(normalize(normalize(c)), normalize(c)));
    CHECK(cat_equal(normalize(parse_cat(to_string(c))), normalize(c)));
  }
}

TEST_CASE("printing and parsing a formula gives it back") {
  for (auto& f : random_formulas(14, 300)) {
    CAPTURE(to_string(f));
    CHECK(alpha_equal(parse_formula(to_string(f)), f));
  }
}

TEST_CASE("substitution removes the variable and avoids capture") {
  FormulaGen g(15);
  for (int i = 0; i < 200; ++i) {
    Form f = g.gen(3, Polarity::Pos, {"u", "w"});
    Form s = substitute(f, "u", var("x0"));
    CAPTURE(to_string(f));
    CHECK_FALSE(free_vars(s).count("u"));
    if (free_vars(f).count("u")) CHECK(free_vars(s).count("x0"));
    // renaming back gives an alpha-equal formula when x0 was not free before
    if (!free_vars(f).count("x0")) CHECK(alpha_equal(substitute(s, "x0", var("u")), f));
  }
}

TEST_CASE("alpha equality is an equivalence on renamed binders") {
  auto fs = random_formulas(16, 100);
  for (auto& f : fs) {
    Form g = parse_formula(to_string(f));
    CHECK(alpha_equal(f, f));
    CHECK(alpha_equal(f, g) == alpha_equal(g, f));
  }
  for (size_t i = 0; i + 2 < fs.size(); ++i)
    if (alpha_equal(fs[i], fs[i + 1]) && alpha_equal(fs[i + 1], fs[i + 2])) CHECK(alpha_equal(fs[i], fs[i + 2]));
}

TEST_CASE("J round trips on random models") {
  DerivationFile f = parse_derivation(R"(category C
atom P(+C)
deriv fwd = (J e (premise h : [a:C] p:P(a) |- P(a)) : [a:C, b:C] e:hom[C](~a, b), p:P(a) |- P(b))
deriv inv = (Jinv e (premise k : [a:C, b:C] e:hom[C](~a, b), p:P(a) |- P(b)) : [a:C] p:P(a) |- P(a))
)");
  Defs defs = f.defs();
  Rng rng(17);
  long trips = 0;
  for (int i = 0; i < 30; ++i) {
    Model m;
    m.name = "random-" + std::to_string(i);
    m.bases["C"] = random_category(rng);
    AtomTable p;
    p.slots = f.sig.atoms.at("P").slots;
    p.fun = random_functor(m.bases["C"], rng, 3);
    m.atoms["P"] = p;
    m.validate();
    Evaluator ev(m, f.sig);
    for (auto& h : enumerate_dinaturals(ev, parse_sequent("[a:C] p:P(a) |- P(a)"))) {
      DinatFamily j = eval_derivation(ev, *f.find("fwd"), &defs, {{"h", h}});
      CHECK(families_equal(eval_derivation(ev, *f.find("inv"), &defs, {{"k", j}}), h));
      ++trips;
    }
    for (auto& k : enumerate_dinaturals(ev, parse_sequent("[a:C, b:C] e:hom[C](~a, b), p:P(a) |- P(b)"))) {
      DinatFamily j = eval_derivation(ev, *f.find("inv"), &defs, {{"k", k}});
      CHECK(families_equal(eval_derivation(ev, *f.find("fwd"), &defs, {{"h", j}}), k));
      ++trips;
    }
  }
  CHECK(trips > 30);
}

TEST_CASE("natural families restricted to the diagonal are dinatural") {
  Rng rng(18);
  Signature sig = sig_of("category C\natom P(+C)\n");
  for (int i = 0; i < 20; ++i) {
    Model m;
    m.name = "diag-" + std::to_string(i);
    m.bases["C"] = random_category(rng);
    AtomTable p;
    p.slots = sig.atoms.at("P").slots;
    p.fun = random_functor(m.bases["C"], rng, 3);
    m.atoms["P"] = p;
    m.validate();
    Evaluator ev(m, sig);
    // transport (f, q) |-> P(f)(q) is natural in (a, b); read at a = b
    Sequent s = parse_sequent("[x:C] f:hom[C](~x, x), q:P(x) |- P(x)");
    SeqSem S(ev, s);
    const FinCat& c = m.bases["C"];
    const SetFunctor& P = m.atoms["P"].fun;
    DinatFamily fam;
    fam.seq = s;
    for (size_t pi = 0; pi < S.npoints(); ++pi) {
      Point pt = diagonal(S.point(pi));
      fam.table.emplace_back();
      for (size_t k = 0; k < S.ninputs(pt); ++k) {
        auto ks = S.decode(pt, k);
        int mor = c.mor_index(ks[0]);
        int o = S.point(pi)[0];
        int q = P.sets[static_cast<size_t>(o)].index_of(ks[1]);
        fam.table.back().push_back(P.sets[static_cast<size_t>(o)].elems[static_cast<size_t>(
            P.maps[static_cast<size_t>(mor)][static_cast<size_t>(q)])]);
      }
    }
    CAPTURE(m.name);
    CHECK(check_dinatural(ev, fam));
  }
}

TEST_CASE("evaluation and verification are deterministic") {
  auto run = [] {
    std::string out;
    for (auto& e : corpus_entries())
      if (e.name == "comp" || e.name == "yoneda")
        for (auto& r : run_entry(e, model_suite(), {})) out += format_json(r) + "\n";
    return out;
  };
  CHECK(run() == run());
  Rng a(5), b(5);
  for (int i = 0; i < 10; ++i) {
    FinCat x = random_category(a), y = random_category(b);
    CHECK(x.nmor() == y.nmor());
  }
}

TEST_CASE("the persisted composition witness still fails") {
  CompositionWitness w =
      witness_from_json(read_file(std::string(DINAT_SOURCE_DIR) + "/tests/fixtures/composition_witness.json"));
  Signature sig = sig_of("category C\natom P(-C, +C)\natom Q(-C, +C)\natom R(-C, +C)\n");
  Evaluator ev(w.model, sig);
  CHECK(check_dinatural(ev, w.alpha));
  CHECK(check_dinatural(ev, w.beta));
  auto h = hexagon_failure(ev, compose_pointwise(ev, w.alpha, w.beta));
  REQUIRE(h);
  CHECK(h->var == w.failure.var);
  CHECK(h->morphism == w.failure.morphism);
}
