#include <doctest.h>

#include <sys/wait.h>
#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "support.hpp"

namespace fs = std::filesystem;
using namespace dinat;

namespace {

struct Run {
  int code;
  std::string out, err;
};

fs::path scratch() {
  fs::path p = fs::temp_directory_path() / ("dinat-cli-" + std::to_string(::getpid()));
  fs::create_directories(p);
  return p;
}

Run run(const std::string& args) {
  fs::path dir = scratch();
  std::string out = (dir / "out.txt").string(), err = (dir / "err.txt").string();
  std::string cmd = std::string(DINAT_CLI) + " " + args + " >" + out + " 2>" + err;
  int st = std::system(cmd.c_str());
  return {WIFEXITED(st) ? WEXITSTATUS(st) : -1, read_file(out), read_file(err)};
}

std::string src(const std::string& rel) { return std::string(DINAT_SOURCE_DIR) + "/" + rel; }

void write(const fs::path& p, const std::string& text) {
  std::ofstream o(p);
  o << text;
}

}  // namespace

TEST_CASE("check") {
  Run r = run("check " + src("corpus/comp.dinat"));
  CHECK(r.code == 0);
  CHECK(r.out.find("ok comp : [a:C, b:C, c:C] f:hom[C](~a, b), g:hom[C](~b, c) |- hom[C](~a, c)\n") == 0);

  r = run("check " + src("corpus/sym.dinat"));
  CHECK(r.code == 2);
  CHECK(r.out.find("VarianceViolation") != std::string::npos);
  CHECK(r.out.find("variable a occurs in the goal") != std::string::npos);

  r = run("check " + src("corpus/sym.dinat") + " --json");
  CHECK(r.code == 2);
  auto j = nlohmann::json::parse(r.out.substr(0, r.out.find('\n')));
  CHECK(j["status"] == "fail");
  CHECK(j["error"]["kind"] == "VarianceViolation");
  CHECK(j["error"]["var"] == "a");

  CHECK(run("check /nonexistent/none.dinat").code == 3);

  fs::path bad = scratch() / "bad.dinat";
  write(bad, "category C\nderiv d = (refl : [a:C] |- hom[C](~a, a)\n");
  r = run("check " + bad.string());
  CHECK(r.code == 1);
  CHECK(r.err.find("3:1: expected ')'") != std::string::npos);
}

TEST_CASE("eval prints the table and the hexagon verdict") {
  Run r = run("eval " + src("corpus/comp.dinat") + " --model " + src("corpus/models/arrow-0.model") + " --at a,a,b");
  CHECK(r.code == 0);
  CHECK(r.out == "at (a, a, b)\n  (id_a, f) |-> f\ndinaturality: PASS\n");

  fs::path refl = scratch() / "refl.dinat";
  write(refl, "category C\nderiv refl = (refl : [a:C] |- hom[C](~a, a))\n");
  r = run("eval " + refl.string() + " --model " + src("corpus/models/arrow-0.model"));
  CHECK(r.code == 0);
  CHECK(r.out == "at (a)\n  () |-> id_a\nat (b)\n  () |-> id_b\ndinaturality: PASS\n");

  fs::path bad = scratch() / "bad.model";
  write(bad, R"({"name": "bad", "objects": ["o"],
  "morphisms": [{"name": "s", "src": "o", "dst": "o"}, {"name": "t", "src": "o", "dst": "o"}],
  "composition": [{"first": "s", "second": "s", "result": "s"}, {"first": "s", "second": "t", "result": "t"},
                  {"first": "t", "second": "s", "result": "s"}, {"first": "t", "second": "t", "result": "s"}]})");
  r = run("eval " + refl.string() + " --model " + bad.string());
  CHECK(r.code == 4);
  CHECK(r.err.find("(t, s, t)") != std::string::npos);
}

TEST_CASE("verify") {
  Run r = run("verify " + src("corpus/comp.dinat") + " --models " + src("corpus/models"));
  CHECK(r.code == 0);
  CHECK(r.out.find("PASS comp monoid-1 obligation:comp-assoc") != std::string::npos);
  CHECK(r.out.find("summary: ") != std::string::npos);
  CHECK(r.out.find("FAIL") == std::string::npos);

  r = run("verify " + src("corpus/yoneda.dinat") + " --models " + src("corpus/models") + " --max-size 1");
  CHECK(r.code == 0);
  CHECK(r.out.find("BOUND yoneda") != std::string::npos);
  CHECK(r.err.find("warning:") != std::string::npos);

  r = run("verify " + src("corpus/dinat-as-end.dinat") + " --models " + src("corpus/models") + " --enumerate");
  CHECK(r.code == 0);
  CHECK(r.out.find("count:dinat-as-end-inv") != std::string::npos);
}

TEST_CASE("corpus") {
  Run a = run("corpus --json");
  CHECK(a.code == 0);
  Run b = run("corpus --json");
  CHECK(a.out == b.out);
  size_t lines = 0;
  std::istringstream in(a.out);
  for (std::string line; std::getline(in, line); ++lines) CHECK(nlohmann::json::accept(line));
  CHECK(lines > 100);

  fs::path models = scratch() / "models";
  fs::create_directories(models);
  write(models / "broken.model", R"({"name": "broken", "objects": ["a"], "morphisms": [{"name": "f", "src": "a", "dst": "z"}]})");
  Run r = run("corpus --models " + models.string());
  CHECK(r.code == 4);
  CHECK(r.err.find("broken") != std::string::npos);

  fs::path entries = scratch() / "entries";
  fs::create_directories(entries);
  for (auto& de : fs::directory_iterator(src("corpus")))
    if (de.path().extension() == ".dinat") fs::copy_file(de.path(), entries / de.path().filename(), fs::copy_options::overwrite_existing);
  std::string manifest = read_file(src("corpus/MANIFEST"));
  manifest.replace(manifest.find("sym sym.dinat negative"), 22, "sym sym.dinat positive");
  write(entries / "MANIFEST", manifest);
  r = run("corpus --entries " + entries.string());
  CHECK(r.code == 2);
  CHECK(r.out.find("FAIL sym - check:sym") != std::string::npos);
}

TEST_CASE("export-models writes the suite") {
  fs::path dir = scratch() / "export";
  CHECK(run("export-models " + dir.string()).code == 0);
  CHECK(read_file((dir / "arrow-0.model").string()) == read_file(src("corpus/models/arrow-0.model")));
}
