#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "dinat/corpus.hpp"
#include "dinat/gen.hpp"
#include "dinat/model_io.hpp"
#include "dinat/verify.hpp"
#include "json.hpp"

namespace fs = std::filesystem;
using namespace dinat;
using json = nlohmann::ordered_json;

namespace {

enum Exit { Ok = 0, ExitParse = 1, ExitCheck = 2, ExitIo = 3, ExitModel = 4 };

int exit_for(const Error& e) {
  switch (e.kind) {
    case ErrorKind::Parse: return ExitParse;
    case ErrorKind::Io: return ExitIo;
    case ErrorKind::Model: return ExitModel;
    default: return ExitCheck;
  }
}

DerivationFile load_derivations(const std::string& path) {
  return parse_derivation(read_file(path), path);
}

std::vector<Model> load_models(const std::string& dir) {
  std::error_code ec;
  if (!fs::is_directory(dir, ec)) throw Error(ErrorKind::Io, "cannot open directory " + dir);
  std::vector<std::string> paths;
  for (auto& de : fs::directory_iterator(dir))
    if (de.path().extension() == ".model") paths.push_back(de.path().string());
  std::sort(paths.begin(), paths.end());
  std::vector<Model> out;
  for (auto& p : paths) out.push_back(load_model(p));
  return out;
}

json error_json(const Error& e) {
  json j;
  j["kind"] = kind_name(e.kind);
  j["node"] = e.node;
  j["var"] = e.var;
  j["where"] = e.where;
  j["message"] = e.message;
  return j;
}

int cmd_check(const std::string& path, bool as_json) {
  DerivationFile f = load_derivations(path);
  int rc = Ok;
  for (auto& r : check_file(f)) {
    if (as_json) {
      json j;
      j["deriv"] = r.deriv;
      if (r.concl) {
        j["status"] = "ok";
        j["conclusion"] = to_string(*r.concl);
      } else {
        j["status"] = "fail";
        j["error"] = error_json(*r.error);
      }
      std::cout << j.dump() << "\n";
    } else if (r.concl) {
      std::cout << "ok " << r.deriv << " : " << to_string(*r.concl) << "\n";
    } else {
      std::cout << "FAIL " << r.deriv << " " << r.error->what() << "\n";
    }
    if (r.error) rc = ExitCheck;
  }
  return rc;
}

std::string tuple_string(const std::vector<Value>& vs) {
  std::string s = "(";
  for (size_t i = 0; i < vs.size(); ++i) s += (i ? ", " : "") + vs[i].to_string();
  return s + ")";
}

int cmd_eval(const std::string& path, const std::string& model_path, const std::string& at,
             const std::string& deriv_name, bool as_json) {
  DerivationFile f = load_derivations(path);
  Model m = load_model(model_path);
  if (f.derivs.empty()) throw Error(ErrorKind::SchemaMismatch, path + " has no derivations");
  const Deriv* d = deriv_name.empty() ? &f.derivs.front().deriv : f.find(deriv_name);
  if (!d) throw Error(ErrorKind::SchemaMismatch, "no derivation " + deriv_name);
  Defs defs = f.defs();
  CheckResult cr = check(*d, f.sig, &defs);
  if (!cr.premises.empty())
    throw Error(ErrorKind::SchemaMismatch, "derivation has open premise " + cr.premises.begin()->first);
  m.check_covers(f.sig);
  Evaluator ev(m, f.sig);
  DinatFamily fam = eval_derivation(ev, *d, &defs, {}, false);
  SeqSem S(ev, fam.seq);
  std::vector<size_t> points;
  if (at.empty()) {
    for (size_t p = 0; p < S.npoints(); ++p) points.push_back(p);
  } else {
    std::vector<int> objs;
    std::stringstream ss(at);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
      size_t i = objs.size();
      if (i >= S.cats().size()) throw Error(ErrorKind::SchemaMismatch, "--at has more objects than the context");
      int o = S.cats()[i]->obj_index(parse_value(tok));
      if (o < 0) throw Error(ErrorKind::Model, "unknown object " + tok);
      objs.push_back(o);
    }
    if (objs.size() != S.cats().size()) throw Error(ErrorKind::SchemaMismatch, "--at needs one object per variable");
    points.push_back(S.point_index(objs));
  }
  for (size_t p : points) {
    std::vector<int> objs = S.point(p);
    std::vector<Value> names;
    for (size_t i = 0; i < objs.size(); ++i) names.push_back(S.cats()[i]->objects[objs[i]]);
    Point pt = diagonal(objs);
    if (!as_json) std::cout << "at " << tuple_string(names) << "\n";
    for (size_t k = 0; k < S.ninputs(pt); ++k) {
      auto in = S.decode(pt, k);
      if (as_json) {
        json j;
        json jp = json::array(), ji = json::array();
        for (auto& v : names) jp.push_back(v.to_string());
        for (auto& v : in) ji.push_back(v.to_string());
        j["at"] = jp;
        j["input"] = ji;
        j["output"] = fam.table[p][k].to_string();
        std::cout << j.dump() << "\n";
      } else {
        std::cout << "  " << tuple_string(in) << " |-> " << fam.table[p][k].to_string() << "\n";
      }
    }
  }
  auto h = hexagon_failure(ev, fam);
  if (as_json) {
    json j;
    j["dinaturality"] = h ? "FAIL" : "PASS";
    if (h) j["failure"] = {{"var", h->var}, {"morphism", h->morphism}, {"input", h->input}, {"lhs", h->lhs}, {"rhs", h->rhs}};
    std::cout << j.dump() << "\n";
  } else if (h) {
    std::cout << "dinaturality: FAIL for " << h->var << " along " << h->morphism << " on " << h->input << ": "
              << h->lhs << " vs " << h->rhs << "\n";
  } else {
    std::cout << "dinaturality: PASS\n";
  }
  return h ? ExitCheck : Ok;
}

int report(std::vector<PropertyResult> rs, bool as_json) {
  sort_results(rs);
  for (auto& r : rs) std::cout << (as_json ? format_json(r) : format_human(r)) << "\n";
  Summary s = summarize(rs);
  std::cout << (as_json ? format_json(s) : format_human(s)) << "\n";
  if (s.bound > 0) std::cerr << "warning: " << s.bound << " properties exceeded the enumeration bound\n";
  return s.fail > 0 ? ExitCheck : Ok;
}

int cmd_verify(const std::string& path, const std::string& models_dir, long max_size, std::uint64_t seed,
               bool enumerate, bool as_json) {
  DerivationFile f = load_derivations(path);
  std::vector<Model> models = load_models(models_dir);
  for (auto& r : check_file(f))
    if (r.error) {
      std::cout << "FAIL " << r.deriv << " " << r.error->what() << "\n";
      return ExitCheck;
    }
  if (max_size > 0) set_max_set_size(static_cast<size_t>(max_size));
  VerifyOptions opt;
  opt.seed = seed;
  opt.enumerate = enumerate;
  std::string entry = fs::path(path).stem().string();
  std::vector<PropertyResult> rs;
  for (auto& m : models) {
    auto part = verify_file(f, entry, m, opt);
    rs.insert(rs.end(), part.begin(), part.end());
  }
  return report(rs, as_json);
}

int cmd_corpus(const std::string& models_dir, const std::string& entries_dir, std::uint64_t seed, bool as_json) {
  std::vector<Model> models = model_suite();
  if (!models_dir.empty())
    for (auto& m : load_models(models_dir)) models.push_back(m);
  std::vector<CorpusEntry> entries = entries_dir.empty() ? corpus_entries() : load_corpus(entries_dir);
  VerifyOptions opt;
  opt.seed = seed;
  std::vector<PropertyResult> rs;
  bool parse_failed = false;
  for (auto& e : entries) {
    auto part = run_entry(e, models, opt);
    for (auto& r : part)
      if (r.property == "parse" && r.outcome == Outcome::Fail) parse_failed = true;
    rs.insert(rs.end(), part.begin(), part.end());
  }
  int rc = report(rs, as_json);
  return parse_failed ? ExitParse : rc;
}

int cmd_export_models(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  for (auto& m : model_suite()) {
    std::string p = (fs::path(dir) / (m.name + ".model")).string();
    std::ofstream out(p);
    if (!out) throw Error(ErrorKind::Io, "cannot write " + p);
    out << model_to_json(m);
  }
  return Ok;
}

int cmd_witness(std::uint64_t seed, int models, const std::string& out_path) {
  CompositionSearchStats stats;
  auto w = search_composition_failure(seed, models, &stats);
  std::cerr << stats.models << " models, " << stats.pairs << " pairs\n";
  if (!w) {
    std::cout << "no witness\n";
    return ExitCheck;
  }
  std::string text = witness_to_json(*w);
  if (out_path.empty()) {
    std::cout << text;
  } else {
    std::ofstream out(out_path);
    if (!out) throw Error(ErrorKind::Io, "cannot write " + out_path);
    out << text;
  }
  return Ok;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"dinat: checker and finite-model evaluator for dinatural derivations"};
  app.require_subcommand(1);
  bool as_json = false;
  std::string file, model, at, deriv, models_dir, entries_dir, out_path;
  long max_size = 0;
  std::uint64_t seed = 0;
  bool enumerate = false;
  int nmodels = 200;

  auto* check_cmd = app.add_subcommand("check", "Check every derivation of a file");
  check_cmd->add_option("file", file, "derivation file")->required();
  check_cmd->add_flag("--json", as_json, "JSON-lines output");

  auto* eval_cmd = app.add_subcommand("eval", "Evaluate a closed derivation on a model");
  eval_cmd->add_option("file", file, "derivation file")->required();
  eval_cmd->add_option("--model", model, "model file")->required();
  eval_cmd->add_option("--at", at, "context point, comma-separated objects");
  eval_cmd->add_option("--deriv", deriv, "derivation name (default: the first)");
  eval_cmd->add_flag("--json", as_json, "JSON-lines output");

  auto* verify_cmd = app.add_subcommand("verify", "Run all properties of a file over a model directory");
  verify_cmd->add_option("file", file, "derivation file")->required();
  verify_cmd->add_option("--models", models_dir, "directory of .model files")->required();
  verify_cmd->add_option("--max-size", max_size, "largest set to materialize");
  verify_cmd->add_option("--seed", seed, "sampling seed");
  verify_cmd->add_flag("--enumerate", enumerate, "compare dinatural counts with ends");
  verify_cmd->add_flag("--json", as_json, "JSON-lines output");

  auto* corpus_cmd = app.add_subcommand("corpus", "Run the corpus over the model suite");
  corpus_cmd->add_option("--models", models_dir, "extra .model files");
  corpus_cmd->add_option("--entries", entries_dir, "corpus directory instead of the built-in one");
  corpus_cmd->add_option("--seed", seed, "sampling seed");
  corpus_cmd->add_flag("--json", as_json, "JSON-lines output");

  auto* export_cmd = app.add_subcommand("export-models", "Write the model suite as .model files");
  export_cmd->add_option("dir", out_path, "output directory")->required();

  auto* witness_cmd = app.add_subcommand("witness", "Search random models for a non-dinatural composite");
  witness_cmd->add_option("--seed", seed, "search seed");
  witness_cmd->add_option("--models", nmodels, "number of random models");
  witness_cmd->add_option("--out", out_path, "output file (default: stdout)");

  CLI11_PARSE(app, argc, argv);
  try {
    if (*check_cmd) return cmd_check(file, as_json);
    if (*eval_cmd) return cmd_eval(file, model, at, deriv, as_json);
    if (*verify_cmd) return cmd_verify(file, models_dir, max_size, seed, enumerate, as_json);
    if (*corpus_cmd) return cmd_corpus(models_dir, entries_dir, seed, as_json);
    if (*export_cmd) return cmd_export_models(out_path);
    if (*witness_cmd) return cmd_witness(seed, nmodels, out_path);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_for(e);
  }
  return Ok;
}
