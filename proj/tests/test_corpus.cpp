#include <doctest.h>

#include <algorithm>
#include <set>

#include "dinat/corpus.hpp"
#include "support.hpp"

using namespace dinat;
using namespace dinat::test;

namespace {

const CorpusEntry& entry(const std::vector<CorpusEntry>& es, const std::string& name) {
  auto it = std::find_if(es.begin(), es.end(), [&](const CorpusEntry& e) { return e.name == name; });
  REQUIRE(it != es.end());
  return *it;
}

bool all_pass(const std::vector<PropertyResult>& rs) {
  for (auto& r : rs)
    if (r.outcome != Outcome::Pass) {
      MESSAGE(format_human(r));
      return false;
    }
  return !rs.empty();
}

}  // namespace

TEST_CASE("every worked example has a corpus entry") {
  std::set<std::string> names;
  for (auto& e : corpus_entries()) names.insert(e.name);
  for (auto n : {"comp", "map", "transport", "sym", "yoneda", "coyoneda", "psh-exp", "ran", "lan", "fubini-end",
                 "right-rift", "hom-limits-left", "hom-limits-right", "dinat-as-end", "hom-rel-adj"}) {
    CAPTURE(n);
    CHECK(names.count(n) == 1);
  }
  CHECK_FALSE(entry(corpus_entries(), "sym").positive);
}

TEST_CASE("the built-in corpus matches the corpus directory") {
  auto built = corpus_entries();
  auto disk = load_corpus(DINAT_SOURCE_DIR "/corpus");
  REQUIRE(built.size() == disk.size());
  for (size_t i = 0; i < built.size(); ++i) {
    CHECK(built[i].name == disk[i].name);
    CHECK(built[i].text == disk[i].text);
    CHECK(built[i].positive == disk[i].positive);
  }
}

TEST_CASE("manifest errors") {
  CHECK_THROWS_AS(parse_manifest("comp comp.dinat maybe\n", {{"comp.dinat", ""}}), Error);
  try {
    parse_manifest("comp gone.dinat positive\n", {});
    FAIL("missing file accepted");
  } catch (const Error& e) {
    CHECK(e.kind == ErrorKind::Io);
  }
  CHECK(parse_manifest("; only a comment\n\n", {}).empty());
}

TEST_CASE("model suite") {
  auto suite = model_suite();
  CHECK(suite.size() >= 5);
  std::set<std::string> shapes;
  std::set<size_t> sizes;
  for (auto& m : suite) {
    CAPTURE(m.name);
    CHECK_NOTHROW(m.validate());
    CHECK_NOTHROW(m.check_covers(suite_signature()));
    shapes.insert(m.name.substr(0, m.name.find('-')));
    for (auto& [n, a] : m.atoms)
      if (a.slots.size() == 1)
        for (auto& s : a.fun.sets) sizes.insert(s.size());
  }
  CHECK(shapes == std::set<std::string>{"arrow", "chain", "discrete", "empty", "monoid"});
  CHECK(sizes.count(0));
  CHECK(sizes.count(3));
  CHECK(*sizes.rbegin() <= 3);
  const FinCat& mon = suite[9].bases.at("C");
  CHECK(mon.nobj() == 1);
  CHECK(mon.nmor() == 2);
  auto again = model_suite();
  for (size_t i = 0; i < suite.size(); ++i) CHECK(model_to_json(suite[i]) == model_to_json(again[i]));
}

TEST_CASE("model files round-trip and match the shipped copies") {
  for (auto& m : model_suite()) {
    CAPTURE(m.name);
    std::string text = model_to_json(m);
    Model back = parse_model(text, m.name);
    CHECK(model_to_json(back) == text);
    CHECK(read_file(std::string(DINAT_SOURCE_DIR "/corpus/models/") + m.name + ".model") == text);
  }
}

TEST_CASE("a non-associative category is rejected naming the triple") {
  const char* text = R"({
  "name": "bad",
  "objects": ["o"],
  "morphisms": [{"name": "s", "src": "o", "dst": "o"}, {"name": "t", "src": "o", "dst": "o"}],
  "composition": [
    {"first": "s", "second": "s", "result": "s"},
    {"first": "s", "second": "t", "result": "t"},
    {"first": "t", "second": "s", "result": "s"},
    {"first": "t", "second": "t", "result": "s"}
  ]
})";
  try {
    parse_model(text, "bad.model");
    FAIL("accepted");
  } catch (const Error& e) {
    CHECK(e.kind == ErrorKind::Model);
    std::string w = e.what();
    CHECK(w.find("associative") != std::string::npos);
    CHECK(w.find("(t, s, t)") != std::string::npos);
  }
}

TEST_CASE("functor and atom tables are validated") {
  std::string text = kArrowModel;
  text.replace(text.find("\"map\": {\"0\": \"0\"}"), 18, "\"map\": {\"0\": \"7\"}");
  CHECK_THROWS_AS(parse_model(text, "broken"), Error);
  CHECK_THROWS_AS(parse_model("{ not json", "x"), Error);
}

TEST_CASE("comp runs green on the suite") {
  auto rs = run_entry(entry(corpus_entries(), "comp"), model_suite(), {});
  CHECK(all_pass(rs));
  int obligations = 0;
  for (auto& r : rs) obligations += r.property.rfind("obligation:", 0) == 0;
  CHECK(obligations == 3 * static_cast<int>(model_suite().size()));
}

TEST_CASE("sym is a passing negative entry and a failing positive one") {
  CorpusEntry sym = entry(corpus_entries(), "sym");
  auto rs = run_entry(sym, model_suite(), {});
  REQUIRE(rs.size() == 1);
  CHECK(rs[0].property == "reject:sym");
  CHECK(rs[0].outcome == Outcome::Pass);
  sym.positive = true;
  rs = run_entry(sym, model_suite(), {});
  REQUIRE(rs.size() == 1);
  CHECK(rs[0].property == "check:sym");
  CHECK(rs[0].outcome == Outcome::Fail);
}

TEST_CASE("a negative entry expecting the wrong class fails") {
  CorpusEntry sym = entry(corpus_entries(), "sym");
  sym.text.replace(sym.text.find("reject sym VarianceViolation"), 28, "reject sym SchemaMismatch");
  auto rs = run_entry(sym, {}, {});
  REQUIRE(rs.size() == 1);
  CHECK(rs[0].outcome == Outcome::Fail);
}

TEST_CASE("a false obligation is caught on the models") {
  CorpusEntry e{"endo", "endo.dinat", R"(category C
obligation wrong :
  (id : [x:C] p:hom[C](~x, x) |- hom[C](~x, x))
  =
  (weaken p (refl : [x:C] |- hom[C](~x, x)) : [x:C] p:hom[C](~x, x) |- hom[C](~x, x))
  by direct
)",
                true};
  std::map<std::string, Outcome> by_model;
  for (auto& r : run_entry(e, model_suite(), {})) by_model[r.model] = r.outcome;
  CHECK(by_model["arrow-0"] == Outcome::Pass);
  CHECK(by_model["monoid-0"] == Outcome::Fail);
}
