#include <doctest.h>

#include "dinat/corpus.hpp"
#include "support.hpp"

using namespace dinat;
using namespace dinat::test;

namespace {

const char* kComp = R"(category C
deriv comp =
  (J f
    (id : [a:C, c:C] g:hom[C](~a, c) |- hom[C](~a, c))
    : [a:C, b:C, c:C] f:hom[C](~a, b), g:hom[C](~b, c) |- hom[C](~a, c))
)";

Sequent check_text(const std::string& text, const std::string& name = "") {
  DerivationFile f = parse_derivation(text);
  Defs defs = f.defs();
  const Deriv* d = name.empty() ? &f.derivs.front().deriv : f.find(name);
  REQUIRE(d);
  return check_derivation(*d, f.sig, &defs);
}

Error check_error(const std::string& text) {
  try {
    check_text(text);
  } catch (const Error& e) {
    return e;
  }
  FAIL("derivation was accepted");
  return Error(ErrorKind::Soundness, "");
}

}  // namespace

TEST_CASE("comp checks with the composition sequent") {
  CHECK(to_string(check_text(kComp)) == "[a:C, b:C, c:C] f:hom[C](~a, b), g:hom[C](~b, c) |- hom[C](~a, c)");
}

TEST_CASE("id at an atom") {
  Sequent s = check_text("category C\natom R(-C, +C)\nderiv i = (id : [x:C] p:R(~x, x) |- R(~x, x))\n");
  CHECK(to_string(s) == "[x:C] p:R(~x, x) |- R(~x, x)");
}

TEST_CASE("symmetry is rejected with a variance violation naming the occurrence") {
  Error e = check_error(R"(category C
deriv sym = (J e (refl : [a:C] |- hom[C](~a, a)) : [a:C, b:C] e:hom[C](~a, b) |- hom[C](~b, a))
)");
  CHECK(e.kind == ErrorKind::VarianceViolation);
  CHECK((e.var == "a" || e.var == "b"));
  CHECK(e.where.rfind("goal:", 0) == 0);
}

TEST_CASE("hom elimination side condition") {
  Sequent comp = parse_sequent("[a:C, b:C, c:C] f:hom[C](~a, b), g:hom[C](~b, c) |- hom[C](~a, c)");
  CHECK(check_hom_elim_side_condition(comp, "a", "b", "f"));
  Sequent sym = parse_sequent("[a:C, b:C] e:hom[C](~a, b) |- hom[C](~b, a)");
  CHECK_FALSE(check_hom_elim_side_condition(sym, "a", "b", "e"));
  Sequent dummy = parse_sequent("[a:C, b:C] e:hom[C](~a, b) |- T()");
  CHECK(check_hom_elim_side_condition(dummy, "a", "b", "e"));
  Sequent bad = parse_sequent("[a:C, b:C] e:P(a) |- T()");
  CHECK_THROWS_AS(check_hom_elim_side_condition(bad, "a", "b", "e"), Error);
}

TEST_CASE("a wrong claimed conclusion is a schema mismatch") {
  std::string text = kComp;
  text.replace(text.find("(id : [a:C, c:C] g:hom[C](~a, c) |- hom[C](~a, c))"), 51,
               "(id : [a:C, c:C] g:hom[C](~c, c) |- hom[C](~c, c))");
  Error e = check_error(text);
  CHECK(e.kind == ErrorKind::SchemaMismatch);
}

TEST_CASE("unknown atoms and wrong arity are reported") {
  CHECK(check_error("category C\nderiv d = (id : [x:C] p:Q(x) |- Q(x))\n").kind == ErrorKind::UnboundVariable);
  CHECK(check_error("category C\natom P(+C)\nderiv d = (id : [x:C] p:P(x, x) |- P(x, x))\n").kind ==
        ErrorKind::ArityMismatch);
  CHECK(check_error("category C\natom P(+C)\nderiv d = (id : [x:C] p:P(y) |- P(y))\n").kind ==
        ErrorKind::UnboundVariable);
}

TEST_CASE("exchange needs adjacent variables") {
  Error e = check_error(R"(category C
atom P(+C)
deriv d =
  (exchange a c
    (weaken p (premise h : [a:C, b:C, c:C] |- P(c)) : [a:C, b:C, c:C] p:P(a) |- P(c))
    : [c:C, b:C, a:C] p:P(a) |- P(c))
)");
  CHECK(e.kind == ErrorKind::SchemaMismatch);
}

TEST_CASE("hom_rel_adj rejects a context depending on the equality variables") {
  Error e = check_error(R"(category C
category D
atom E(-D, +D)
atom R(-C, +C)
atom S(-C, +C, -D, +D)
deriv d =
  (hom_rel_adj e
    (premise h : [z:C, x:D] k:E(~x, x), r:R(~z, z) |- S(~z, z, ~x, x))
    : [a:C, b:C, x:D] e:hom[C](~a, b), k:E(~x, x), r:R(~a, a) |- S(~a, b, ~x, x))
)");
  CHECK(e.kind != ErrorKind::Parse);
}

TEST_CASE("macro expansion preserves the conclusion on every corpus derivation") {
  for (auto& entry : corpus_entries()) {
    if (!entry.positive) continue;
    DerivationFile f = parse_derivation(entry.text, entry.file);
    Defs defs = f.defs();
    for (auto& nd : f.derivs) {
      CAPTURE(nd.name);
      Sequent a = check_derivation(nd.deriv, f.sig, &defs);
      Deriv ex = expand_all(nd.deriv, f.sig, &defs);
      Sequent b = check_derivation(ex, f.sig);
      CHECK(sequent_equal(a, b));
    }
  }
}

TEST_CASE("J side conditions are invariant under renaming") {
  std::string text = kComp;
  for (auto [from, to] : {std::pair<std::string, std::string>{"~a", "~u"}, {"(a", "(u"}, {"[a:", "[u:"}}) {
    for (size_t p = text.find(from); p != std::string::npos; p = text.find(from, p + to.size()))
      text.replace(p, from.size(), to);
  }
  CHECK(text.find("u:C") != std::string::npos);
  CHECK(to_string(check_text(text)) == "[u:C, b:C, c:C] f:hom[C](~u, b), g:hom[C](~b, c) |- hom[C](~u, c)");
}

TEST_CASE("equational judgements") {
  DerivationFile f = parse_derivation(
      R"(category C
deriv comp =
  (J f
    (id : [a:C, c:C] g:hom[C](~a, c) |- hom[C](~a, c))
    : [a:C, b:C, c:C] f:hom[C](~a, b), g:hom[C](~b, c) |- hom[C](~a, c))
deriv idh = (id : [a:C, b:C] f:hom[C](~a, b) |- hom[C](~a, b))
obligation same : (use comp : [a:C, b:C, c:C] f:hom[C](~a, b), g:hom[C](~b, c) |- hom[C](~a, c))
  = (use comp : [a:C, b:C, c:C] f:hom[C](~a, b), g:hom[C](~b, c) |- hom[C](~a, c)) by direct
obligation unit :
  (Jinv g (use comp : [a:C, b:C, c:C] f:hom[C](~a, b), g:hom[C](~b, c) |- hom[C](~a, c))
    : [a:C, b:C] f:hom[C](~a, b) |- hom[C](~a, b))
  = (use idh : [a:C, b:C] f:hom[C](~a, b) |- hom[C](~a, b)) by jeq f
obligation unit-direct :
  (Jinv g (use comp : [a:C, b:C, c:C] f:hom[C](~a, b), g:hom[C](~b, c) |- hom[C](~a, c))
    : [a:C, b:C] f:hom[C](~a, b) |- hom[C](~a, b))
  = (use idh : [a:C, b:C] f:hom[C](~a, b) |- hom[C](~a, b)) by direct
obligation bad-label :
  (Jinv g (use comp : [a:C, b:C, c:C] f:hom[C](~a, b), g:hom[C](~b, c) |- hom[C](~a, c))
    : [a:C, b:C] f:hom[C](~a, b) |- hom[C](~a, b))
  = (use idh : [a:C, b:C] f:hom[C](~a, b) |- hom[C](~a, b)) by jeq q
)");
  Defs defs = f.defs();
  CHECK(check_eq_judgement(f.obligations[0], f.sig, &defs).empty());
  auto rest = check_eq_judgement(f.obligations[1], f.sig, &defs);
  REQUIRE(rest.size() == 1);
  CHECK(rest[0].name.find(":=refl") != std::string::npos);
  Sequent contracted = check_derivation(rest[0].lhs, f.sig, &defs);
  CHECK(to_string(contracted) == "[a:C] |- hom[C](~a, a)");
  auto direct = check_eq_judgement(f.obligations[2], f.sig, &defs);
  REQUIRE(direct.size() == 1);
  CHECK(direct[0].name == "unit-direct");
  CHECK_THROWS_AS(check_eq_judgement(f.obligations[3], f.sig, &defs), Error);
}

TEST_CASE("bounded search") {
  Signature sig = sig_of("category C\n");
  SearchStats st;
  auto r = bounded_search(parse_sequent("[a:C] |- hom[C](~a, a)"), sig, 0, &st);
  REQUIRE(r);
  CHECK((*r)->rule == Rule::Refl);

  auto c = bounded_search(
      parse_sequent("[a:C, b:C, c:C] f:hom[C](~a, b), g:hom[C](~b, c) |- hom[C](~a, c)"), sig, 2);
  REQUIRE(c);
  CHECK(to_string(check_derivation(*c, sig)) ==
        "[a:C, b:C, c:C] f:hom[C](~a, b), g:hom[C](~b, c) |- hom[C](~a, c)");

  SearchStats s3;
  CHECK_FALSE(bounded_search(parse_sequent("[a:C, b:C] e:hom[C](~a, b) |- hom[C](~b, a)"), sig, 3, &s3));
  CHECK(s3.nodes > 1);
}
