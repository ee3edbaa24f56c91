#include <doctest.h>

#include <numeric>

#include "dinat/corpus.hpp"
#include "support.hpp"

using namespace dinat;
using namespace dinat::test;

namespace {

Model bare(const FinCat& c, const std::string& name) {
  Model m;
  m.name = name;
  m.bases["C"] = c;
  m.validate();
  return m;
}

std::vector<Model> shapes() {
  return {bare(walking_arrow(), "arrow"),   bare(discrete_category(2), "discrete"), bare(chain3(), "chain"),
          bare(idempotent_monoid(), "monoid"), bare(empty_category(), "empty"),     bare(parallel_pair(), "pair")};
}

const Signature& csig() {
  static Signature s = sig_of("category C\n");
  return s;
}

size_t closed_size(const std::string& formula, const Model& m, const Signature& sig = csig()) {
  return eval_formula(parse_formula(formula), m, sig, {}, {}).size();
}

// Wedges of hom: t_x in hom(x, x) with t_a;f = f;t_b for every f: a -> b.
size_t end_of_hom_oracle(const FinCat& c) {
  size_t n = 0;
  std::vector<size_t> ix(c.nobj(), 0);
  while (true) {
    bool ok = true;
    for (int f = 0; f < c.nmor() && ok; ++f) {
      int a = c.mors[f].src, b = c.mors[f].dst;
      int ta = c.hom_mors(a, a)[ix[a]], tb = c.hom_mors(b, b)[ix[b]];
      ok = c.compose(ta, f) == c.compose(f, tb);
    }
    n += ok;
    int k = 0;
    while (k < c.nobj() && ++ix[k] == c.hom_mors(k, k).size()) ix[k++] = 0;
    if (k == c.nobj()) break;
  }
  return n;
}

struct UnionFind {
  std::vector<int> p;
  explicit UnionFind(int n) : p(n) { std::iota(p.begin(), p.end(), 0); }
  int find(int x) { return p[x] == x ? x : p[x] = find(p[x]); }
  void unite(int a, int b) { p[find(a)] = find(b); }
  int classes() {
    int n = 0;
    for (int i = 0; i < static_cast<int>(p.size()); ++i) n += find(i) == i;
    return n;
  }
};

// Classes of the disjoint union of hom(c, c) under f;p ~ p;f for p: b -> a.
int coend_of_hom_oracle(const FinCat& c) {
  std::map<int, int> slot;  // endomorphism -> element index
  for (int x = 0; x < c.nobj(); ++x)
    for (int m : c.hom_mors(x, x)) slot.emplace(m, static_cast<int>(slot.size()));
  UnionFind uf(static_cast<int>(slot.size()));
  for (int f = 0; f < c.nmor(); ++f) {
    int a = c.mors[f].src, b = c.mors[f].dst;
    for (int p : c.hom_mors(b, a)) uf.unite(slot[c.compose(f, p)], slot[c.compose(p, f)]);
  }
  return uf.classes();
}

// Connected components of the category: the coend of the constant singleton.
int components_oracle(const FinCat& c) {
  UnionFind uf(c.nobj());
  for (auto& m : c.mors) uf.unite(m.src, m.dst);
  return uf.classes();
}

DinatFamily eval_named(Evaluator& ev, const std::string& text, const std::string& name) {
  DerivationFile f = parse_derivation(text);
  Defs defs = f.defs();
  return eval_derivation(ev, *f.find(name), &defs, {}, false);
}

const char* kCompText = R"(category C
deriv comp =
  (J f
    (id : [a:C, c:C] g:hom[C](~a, c) |- hom[C](~a, c))
    : [a:C, b:C, c:C] f:hom[C](~a, b), g:hom[C](~b, c) |- hom[C](~a, c))
deriv refl = (refl : [a:C] |- hom[C](~a, a))
)";

}  // namespace

TEST_CASE("hom, products and exponentials have the expected sizes") {
  Model m = arrow_model();
  Signature sig = sig_of("category C\natom P(+C)\n");
  TermCtx ctx{{"x", cat_base("C")}, {"y", cat_base("C")}};
  FinSet h = eval_formula(parse_formula("hom[C](~x, y)"), m, sig, ctx, {{0, 0}, {1, 1}});
  REQUIRE(h.size() == 1);
  CHECK(h.elems[0].to_string() == "f");
  FinSet pr = eval_formula(parse_formula("P(x) & P(y)"), m, sig, ctx, {{1, 1}, {1, 1}});
  CHECK(pr.size() == 4);
  // x at (neg a, pos b): P(~x) => hom(~x, x) maps P(b) to hom(a, b)
  TermCtx one{{"x", cat_base("C")}};
  CHECK(eval_formula(parse_formula("P(~x) => hom[C](~x, x)"), m, sig, one, {{0, 1}}).size() == 1);
  // the left occurrence reads the contravariant component: P(a) = {0} to P(b)
  CHECK(eval_formula(parse_formula("P(~x) => P(x)"), m, sig, one, {{0, 1}}).size() == 2);
  CHECK(eval_formula(parse_formula("hom[C](x, ~x) => P(x)"), m, sig, one, {{0, 1}}).size() == 1);
}

TEST_CASE("ends and coends of hom against brute-force oracles") {
  for (auto& m : shapes()) {
    CAPTURE(m.name);
    const FinCat& c = m.bases.at("C");
    CHECK(closed_size("end x:C. hom[C](~x, x)", m) == end_of_hom_oracle(c));
    CHECK(closed_size("coend x:C. hom[C](~x, x)", m) == static_cast<size_t>(coend_of_hom_oracle(c)));
    CHECK(closed_size("coend x:C. top", m) == static_cast<size_t>(components_oracle(c)));
    CHECK(closed_size("end x:C. top", m) == 1);
  }
  CHECK(closed_size("end x:C. hom[C](~x, x)", shapes()[0]) == 1);
  // one identity per object and no cross conditions: a single wedge
  CHECK(closed_size("end x:C. hom[C](~x, x)", shapes()[1]) == 1);
  CHECK(closed_size("coend x:C. hom[C](~x, x)", shapes()[1]) == 2);
  CHECK(closed_size("end x:C. hom[C](~x, x)", shapes()[4]) == 1);
  CHECK(closed_size("coend x:C. hom[C](~x, x)", shapes()[0]) == 2);
  CHECK(closed_size("coend x:C. top", shapes()[0]) == 1);
  CHECK(closed_size("coend x:C. hom[C](~x, x)", shapes()[4]) == 0);
}

TEST_CASE("dinatural counts") {
  Model arrow = shapes()[0];
  Evaluator ev(arrow, csig());
  CHECK(count_dinaturals(ev, parse_sequent("[x:C] p:top |- top")) == 1);
  CHECK(count_dinaturals(ev, parse_sequent("[x:C] p:top |- hom[C](~x, x)")) == 1);
  for (auto& m : shapes()) {
    CAPTURE(m.name);
    Evaluator e2(m, csig());
    CHECK(count_dinaturals(e2, parse_sequent("[x:C] p:top |- top")) == 1);
    CHECK(count_dinaturals(e2, parse_sequent("[x:C] p:hom[C](~x, x) |- hom[C](~x, x)")) ==
          closed_size("end x:C. hom[C](x, ~x) => hom[C](~x, x)", m));
  }
  Model monoid = shapes()[3];
  Evaluator mon(monoid, csig());
  // both endomorphisms of the monoid commute with s
  CHECK(count_dinaturals(mon, parse_sequent("[x:C] p:top |- hom[C](~x, x)")) == 2);
}

TEST_CASE("refl evaluates to identities") {
  Model m = arrow_model();
  Evaluator ev(m, csig());
  DinatFamily r = eval_named(ev, kCompText, "refl");
  REQUIRE(r.table.size() == 2);
  CHECK(r.table[0][0].to_string() == "id_a");
  CHECK(r.table[1][0].to_string() == "id_b");
  CHECK(check_dinatural(ev, r));
}

TEST_CASE("comp evaluates to the composition table") {
  for (auto& m : shapes()) {
    CAPTURE(m.name);
    const FinCat& c = m.bases.at("C");
    Evaluator ev(m, csig());
    DinatFamily fam = eval_named(ev, kCompText, "comp");
    SeqSem S(ev, fam.seq);
    for (size_t p = 0; p < S.npoints(); ++p) {
      Point pt = diagonal(S.point(p));
      for (size_t k = 0; k < S.ninputs(pt); ++k) {
        auto in = S.decode(pt, k);
        int f = c.mor_index(in[0]), g = c.mor_index(in[1]);
        CHECK(fam.table[p][k] == c.mors[c.compose(f, g)].name);
      }
    }
    CHECK(check_dinatural(ev, fam));
  }
  Model arrow = arrow_model();
  Evaluator ev(arrow, csig());
  DinatFamily fam = eval_named(ev, kCompText, "comp");
  SeqSem S(ev, fam.seq);
  size_t p = S.point_index({0, 0, 1});
  REQUIRE(S.ninputs(diagonal({0, 0, 1})) == 1);
  CHECK(tuple_string_of(S.decode(diagonal({0, 0, 1}), 0)) == "(id_a, f)");
  CHECK(fam.table[p][0].to_string() == "f");
}

TEST_CASE("a corrupted comp family fails the hexagon") {
  Model m = bare(idempotent_monoid(), "monoid");
  Evaluator ev(m, csig());
  DinatFamily fam = eval_named(ev, kCompText, "comp");
  SeqSem S(ev, fam.seq);
  Point pt = diagonal({0, 0, 0});
  // every hom set of the walking arrow has at most one element, so the
  // corruption needs the monoid: (s, s) |-> s becomes id
  size_t k = 0;
  while (!(S.decode(pt, k)[0].to_string() == "s" && S.decode(pt, k)[1].to_string() == "s")) ++k;
  fam.table[0][k] = Value::name("id_o");
  auto h = hexagon_failure(ev, fam);
  REQUIRE(h);
  CHECK_FALSE(check_dinatural(ev, fam));
}

TEST_CASE("transport moves a point along a morphism") {
  Model m = arrow_model();
  DerivationFile f = parse_derivation(R"(category C
atom P(+C)
deriv transport = (J e (id : [a:C] k:P(a) |- P(a)) : [a:C, b:C] e:hom[C](~a, b), k:P(a) |- P(b))
)");
  Evaluator ev(m, f.sig);
  Defs defs = f.defs();
  DinatFamily fam = eval_derivation(ev, f.derivs[0].deriv, &defs);
  SeqSem S(ev, fam.seq);
  size_t p = S.point_index({0, 1});
  Point pt = diagonal({0, 1});
  REQUIRE(S.ninputs(pt) == 1);
  CHECK(S.decode(pt, 0)[0].to_string() == "f");
  CHECK(S.decode(pt, 0)[1].to_string() == "0");
  CHECK(fam.table[p][0].to_string() == "0");
}

TEST_CASE("identity families pass the hexagon and equal themselves") {
  for (auto& m : model_suite()) {
    CAPTURE(m.name);
    Evaluator ev(m, suite_signature());
    for (auto a : {"R(~x, x)", "S(~x, x, ~y, y)", "P(x)"}) {
      Sequent s = parse_sequent(std::string("[x:C, y:D] p:") + a + " |- " + a);
      DinatFamily id = eval_derivation(ev, make_deriv(Rule::Id, {}, {}, s));
      CHECK(check_dinatural(ev, id));
      CHECK(families_equal(id, id));
      CHECK(is_identity_family(ev, id));
    }
  }
}

TEST_CASE("the set bound is enforced") {
  Model m = model_suite()[2];  // U has three elements
  Form f = parse_formula("U() => U()");
  CHECK(eval_formula(f, m, suite_signature(), {}, {}).size() == 27);
  size_t old = max_set_size();
  set_max_set_size(2);
  try {
    eval_formula(f, m, suite_signature(), {}, {});
    FAIL("bound not enforced");
  } catch (const Error& e) {
    CHECK(e.kind == ErrorKind::BoundExceeded);
  }
  set_max_set_size(old);
}

TEST_CASE("composites with a natural second map are dinatural") {
  // alpha: R(~x, x) -> A(x) dinatural, beta: A(x) -> B(x) natural
  Signature sig = suite_signature();
  Sequent sa = parse_sequent("[x:C] p:R(~x, x) |- A(x)");
  Sequent sb = parse_sequent("[x:C] p:A(x) |- B(x)");
  long pairs = 0;
  for (auto& m : model_suite()) {
    Evaluator ev(m, sig);
    EnumOptions eo;
    eo.limit = 16;
    for (auto& a : enumerate_dinaturals(ev, sa, eo))
      for (auto& b : enumerate_dinaturals(ev, sb, eo)) {
        ++pairs;
        CHECK(check_dinatural(ev, compose_pointwise(ev, a, b)));
      }
  }
  CHECK(pairs > 0);
}

TEST_CASE("constant singletons never give a composition failure") {
  Signature sig = sig_of("category C\natom T()\n");
  for (auto& base : shapes()) {
    Model m = base;
    AtomTable t;
    t.fun = constant_functor(unit_category(), 1);
    m.atoms["T"] = t;
    Evaluator ev(m, sig);
    Sequent s = parse_sequent("[x:C] p:T() |- T()");
    for (auto& a : enumerate_dinaturals(ev, s))
      for (auto& b : enumerate_dinaturals(ev, s)) CHECK(check_dinatural(ev, compose_pointwise(ev, a, b)));
  }
}
