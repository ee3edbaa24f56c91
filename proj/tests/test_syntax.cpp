#include <doctest.h>

#include "dinat/corpus.hpp"
#include "support.hpp"

using namespace dinat;
using namespace dinat::test;

TEST_CASE("normalize pushes op inward and is idempotent") {
  Cat c = cat_base("C"), d = cat_base("D");
  CHECK(cat_equal(normalize(cat_op(cat_op(c))), c));
  CHECK(to_string(normalize(cat_op(cat_prod(c, d)))) == "C^op * D^op");
  CHECK(cat_equal(normalize(c), c));
  Cat e = cat_op(cat_prod(cat_op(c), cat_op(cat_prod(d, cat_unit()))));
  CHECK(cat_equal(normalize(normalize(e)), normalize(e)));
  CHECK(to_string(normalize(e)) == "C * D * 1");
  CHECK(cat_equal(parse_cat(to_string(normalize(e))), normalize(e)));
}

TEST_CASE("occurrences follow slot variance and implication") {
  auto occ = occurrences(parse_formula("hom[C](~x, y)"), "x");
  REQUIRE(occ.size() == 1);
  CHECK(occ[0].pol == Polarity::Neg);

  occ = occurrences(parse_formula("P(~x) => Q(x)"), "x");
  REQUIRE(occ.size() == 2);
  CHECK(occ[0].pol == Polarity::Neg);
  CHECK(occ[1].pol == Polarity::Pos);

  CHECK(occurrences(top(), "x").empty());
}

TEST_CASE("computed polarity agrees with the annotation or the formula is rejected") {
  Signature sig = sig_of("category C\natom P(+C)\natom Q(+C)\n");
  TypeEnv env{{"x", cat_base("C")}};
  Form good = parse_formula("P(~x) => Q(x)");
  CHECK_NOTHROW(check_formula(good, env, sig));
  auto occ = computed_occurrences(good, "x", env, sig);
  REQUIRE(occ.size() == 2);
  CHECK(occ[0].pol == Polarity::Neg);
  CHECK(occ[1].pol == Polarity::Pos);
  try {
    check_formula(parse_formula("P(x) => Q(x)"), env, sig);
    FAIL("annotation mismatch accepted");
  } catch (const Error& e) {
    CHECK(e.kind == ErrorKind::TypeMismatch);
  }
}

TEST_CASE("substitution") {
  Form f = parse_formula("hom[D](~x, y)");
  CHECK(to_string(substitute(f, "y", app("F", {var("z")}))) == "hom[D](~x, F(z))");
  CHECK(to_string(substitute(f, "x", app("F", {var("z")}))) == "hom[D](F(~z), y)");
  CHECK(substitute(top(), "v", var("t"))->kind == FormulaNode::Kind::Top);

  Form b = parse_formula("end x:C. R(~x, v)");
  Form s = substitute(b, "v", var("x"));
  CHECK(alpha_equal(s, parse_formula("end y:C. R(~y, x)")));
  CHECK_FALSE(alpha_equal(s, parse_formula("end x:C. R(~x, x)")));
}

TEST_CASE("alpha equality") {
  CHECK(alpha_equal(parse_formula("end x:C. P(~x, x)"), parse_formula("end c:C. P(~c, c)")));
  CHECK_FALSE(alpha_equal(parse_formula("P(x)"), parse_formula("P(y)")));
  CHECK(alpha_equal(parse_formula("coend x:C. hom[C](~x, a)"), parse_formula("coend y:C. hom[C](~y, a)")));
  CHECK_FALSE(alpha_equal(parse_formula("end x:C. hom[C](~x, y)"), parse_formula("end y:C. hom[C](~y, y)")));
}

TEST_CASE("parse errors carry a position") {
  try {
    parse_derivation("category C\nderiv d =\n  (refl : [a:C] |- hom[C](~a, a)\n", "f.dinat");
    FAIL("unclosed parenthesis accepted");
  } catch (const Error& e) {
    CHECK(e.kind == ErrorKind::Parse);
    CHECK(e.line == 4);
    CHECK(std::string(e.what()).find("expected") != std::string::npos);
  }
  try {
    parse_derivation("category C\ncategory C\n");
    FAIL("duplicate accepted");
  } catch (const Error& e) {
    CHECK(e.kind == ErrorKind::Parse);
    CHECK(std::string(e.what()).find("duplicate") != std::string::npos);
  }
}

TEST_CASE("empty file") {
  DerivationFile f = parse_derivation("");
  CHECK(f.derivs.empty());
  CHECK(f.sig.atoms.empty());
  CHECK(f.sig.categories.empty());
}

TEST_CASE("parse, print and parse again is stable on every corpus file") {
  for (auto& e : corpus_entries()) {
    CAPTURE(e.name);
    DerivationFile a = parse_derivation(e.text, e.file);
    std::string printed = print_file(a);
    DerivationFile b = parse_derivation(printed, e.file);
    CHECK(print_file(b) == printed);
    REQUIRE(a.derivs.size() == b.derivs.size());
    for (size_t i = 0; i < a.derivs.size(); ++i) CHECK(deriv_equal(a.derivs[i].deriv, b.derivs[i].deriv));
  }
}

TEST_CASE("hyphenated names lex as one identifier") {
  DerivationFile f = parse_derivation("category C\nderiv comp-unit = (refl : [a:C] |- hom[C](~a, a))\n");
  REQUIRE(f.derivs.size() == 1);
  CHECK(f.derivs[0].name == "comp-unit");
}
