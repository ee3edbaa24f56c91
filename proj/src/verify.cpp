#include "dinat/verify.hpp"

#include <algorithm>
#include <functional>
#include <tuple>
#include <random>

#include "json.hpp"

namespace dinat {

const char* outcome_name(Outcome o) {
  switch (o) {
    case Outcome::Pass: return "PASS";
    case Outcome::Fail: return "FAIL";
    case Outcome::Bound: return "BOUND";
    case Outcome::Skip: return "SKIP";
  }
  return "?";
}

std::vector<CheckReport> check_file(const DerivationFile& f) {
  Defs defs = f.defs();
  std::vector<CheckReport> out;
  for (auto& nd : f.derivs) {
    CheckReport r;
    r.deriv = nd.name;
    try {
      r.concl = check_derivation(nd.deriv, f.sig, &defs);
    } catch (const Error& e) {
      r.error = e;
    }
    out.push_back(r);
  }
  return out;
}

static std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : s) h = (h ^ c) * 1099511628211ULL;
  return h;
}

std::vector<FamilyEnv> premise_instances(Evaluator& ev, const std::map<std::string, Sequent>& premises,
                                         const VerifyOptions& opt) {
  std::vector<std::pair<std::string, std::vector<DinatFamily>>> pools;
  for (auto& [name, seq] : premises) {
    EnumOptions eo;
    eo.limit = opt.premise_limit * 4;
    eo.max_nodes = opt.max_nodes;
    auto fams = enumerate_dinaturals(ev, seq, eo);
    std::mt19937_64 rng(opt.seed ^ fnv1a(name));
    std::shuffle(fams.begin(), fams.end(), rng);
    if (fams.size() > opt.premise_limit) fams.resize(opt.premise_limit);
    if (fams.empty()) return {};
    pools.emplace_back(name, std::move(fams));
  }
  // walk the product diagonally so every pool contributes
  size_t total = 1;
  for (auto& p : pools) total = std::max(total, p.second.size());
  total = std::min(total, std::max<size_t>(opt.premise_limit, 1));
  std::vector<FamilyEnv> out;
  for (size_t i = 0; i < total; ++i) {
    FamilyEnv env;
    for (auto& [name, fams] : pools) env[name] = fams[i % fams.size()];
    out.push_back(env);
  }
  return out;
}

bool is_identity_family(Evaluator& ev, const DinatFamily& f) {
  if (f.seq.hyps.size() != 1) return false;
  SeqSem S(ev, f.seq);
  for (size_t p = 0; p < S.npoints(); ++p) {
    Point pt = diagonal(S.point(p));
    for (size_t k = 0; k < S.ninputs(pt); ++k)
      if (!(S.decode(pt, k)[0] == f.table[p][k])) return false;
  }
  return true;
}

namespace {

struct Runner {
  const DerivationFile& file;
  const std::string& entry;
  const Model& model;
  const VerifyOptions& opt;
  Defs defs;
  Evaluator ev;
  std::vector<PropertyResult> out;

  Runner(const DerivationFile& f, const std::string& e, const Model& m, const VerifyOptions& o)
      : file(f), entry(e), model(m), opt(o), defs(f.defs()), ev(m, f.sig) {}

  void add(const std::string& prop, Outcome oc, long n, const std::string& detail) {
    out.push_back({entry, model.name, prop, oc, n, detail});
  }

  // Runs body; maps errors to outcomes.
  void guarded(const std::string& prop, const std::function<void()>& body) {
    try {
      body();
    } catch (const Error& e) {
      add(prop, e.kind == ErrorKind::BoundExceeded ? Outcome::Bound : Outcome::Fail, 0, e.what());
    }
  }

  // Evaluations of d under every sampled premise instantiation.
  std::vector<DinatFamily> evaluations(const Deriv& d, std::vector<FamilyEnv>* envs = nullptr) {
    CheckResult cr = check(d, file.sig, &defs);
    std::vector<FamilyEnv> es;
    if (cr.premises.empty())
      es.push_back({});
    else
      es = premise_instances(ev, cr.premises, opt);
    std::vector<DinatFamily> fams;
    for (auto& env : es) fams.push_back(eval_derivation(ev, d, &defs, env, false));
    if (envs) *envs = es;
    return fams;
  }

  void eval_prop(const NamedDeriv& nd) {
    std::string prop = "eval:" + nd.name;
    guarded(prop, [&] {
      auto fams = evaluations(nd.deriv);
      for (auto& f : fams)
        if (auto h = hexagon_failure(ev, f)) {
          add(prop, Outcome::Fail, static_cast<long>(fams.size()),
              "hexagon fails for " + h->var + " along " + h->morphism + " on " + h->input + ": " + h->lhs +
                  " vs " + h->rhs);
          return;
        }
      add(prop, Outcome::Pass, static_cast<long>(fams.size()), fams.empty() ? "no premise instances" : "");
    });
  }

  void obligation_prop(const EqJudgement& j) {
    std::string prop = "obligation:" + j.name;
    guarded(prop, [&] {
      auto rest = check_eq_judgement(j, file.sig, &defs);
      if (rest.empty()) {
        add(prop, Outcome::Pass, 0, "syntactic");
        return;
      }
      long n = 0;
      for (auto& r : rest) {
        std::vector<FamilyEnv> envs;
        auto ls = evaluations(r.lhs, &envs);
        for (size_t i = 0; i < ls.size(); ++i) {
          DinatFamily rf = eval_derivation(ev, r.rhs, &defs, envs[i], false);
          ++n;
          if (!families_equal(ls[i], rf)) {
            add(prop, Outcome::Fail, n, "residual " + r.name + " differs");
            return;
          }
        }
      }
      add(prop, Outcome::Pass, n, j.strategy == EqStrategy::JEq ? "jeq " + j.label : "direct");
    });
  }

  void iso_prop(const IsoPair& iso) {
    std::string prop = "iso:" + iso.fwd + "/" + iso.inv;
    guarded(prop, [&] {
      const Deriv* f = file.find(iso.fwd);
      const Deriv* g = file.find(iso.inv);
      if (!f || !g) throw Error(ErrorKind::SchemaMismatch, "unknown derivation in iso");
      CheckResult cf = check(*f, file.sig, &defs);
      CheckResult cg = check(*g, file.sig, &defs);
      long n = 0;
      if (cf.premises.empty() && cg.premises.empty()) {
        DinatFamily a = eval_derivation(ev, *f, &defs, {}, false);
        DinatFamily b = eval_derivation(ev, *g, &defs, {}, false);
        bool ok = is_identity_family(ev, compose_pointwise(ev, a, b)) &&
                  is_identity_family(ev, compose_pointwise(ev, b, a));
        add(prop, ok ? Outcome::Pass : Outcome::Fail, 2, ok ? "pointwise" : "composite is not the identity");
        return;
      }
      if (cf.premises.size() != 1 || cg.premises.size() != 1)
        throw Error(ErrorKind::SchemaMismatch, "iso sides need one premise each, or none");
      auto round = [&](const Deriv& there, const std::string& pthere, const Deriv& back, const std::string& pback,
                       const Sequent& start) {
        EnumOptions eo;
        eo.limit = opt.premise_limit * 4;
        eo.max_nodes = opt.max_nodes;
        for (auto& h : enumerate_dinaturals(ev, start, eo)) {
          DinatFamily mid = eval_derivation(ev, there, &defs, {{pthere, h}}, false);
          DinatFamily res = eval_derivation(ev, back, &defs, {{pback, mid}}, false);
          ++n;
          if (!families_equal(res, h)) return false;
        }
        return true;
      };
      auto& [pf, sf] = *cf.premises.begin();
      auto& [pg, sg] = *cg.premises.begin();
      bool ok = round(*f, pf, *g, pg, sf) && round(*g, pg, *f, pf, sg);
      add(prop, ok ? Outcome::Pass : Outcome::Fail, n, ok ? "" : "round trip differs");
    });
  }

  void count_prop(const NamedDeriv& nd) {
    std::string prop = "count:" + nd.name;
    guarded(prop, [&] {
      Sequent s = check_derivation(nd.deriv, file.sig, &defs);
      Form body = s.hyps.empty() ? s.goal : imp(flip_form(pack(s.hyp_forms())), s.goal);
      for (size_t i = s.ctx.size(); i-- > 0;) body = end_(s.ctx[i].name, s.ctx[i].cat, body);
      EnumOptions eo;
      eo.max_nodes = opt.max_nodes;
      size_t n = count_dinaturals(ev, s, eo);
      size_t e = ev.set(ev.compile(body, {}), {}).size();
      add(prop, n == e ? Outcome::Pass : Outcome::Fail, static_cast<long>(n),
          std::to_string(n) + " dinaturals, end of size " + std::to_string(e));
    });
  }

  void run() {
    try {
      model.check_covers(file.sig);
    } catch (const Error& e) {
      add("covers", Outcome::Skip, 0, e.message);
      return;
    }
    for (auto& nd : file.derivs) eval_prop(nd);
    for (auto& j : file.obligations) obligation_prop(j);
    for (auto& iso : file.isos) iso_prop(iso);
    if (opt.enumerate)
      for (auto& nd : file.derivs) count_prop(nd);
  }
};

using json = nlohmann::ordered_json;

}  // namespace

std::vector<PropertyResult> verify_file(const DerivationFile& f, const std::string& entry, const Model& m,
                                        const VerifyOptions& opt) {
  Runner r(f, entry, m, opt);
  r.run();
  return r.out;
}

void sort_results(std::vector<PropertyResult>& rs) {
  std::stable_sort(rs.begin(), rs.end(), [](const PropertyResult& a, const PropertyResult& b) {
    return std::tie(a.entry, a.model, a.property) < std::tie(b.entry, b.model, b.property);
  });
}

std::string format_human(const PropertyResult& r) {
  std::string s = std::string(outcome_name(r.outcome)) + " " + r.entry + " " + r.model + " " + r.property + " [" +
                  std::to_string(r.instances) + "]";
  if (!r.detail.empty()) s += " " + r.detail;
  return s;
}

std::string format_json(const PropertyResult& r) {
  json j;
  j["entry"] = r.entry;
  j["model"] = r.model;
  j["property"] = r.property;
  j["outcome"] = outcome_name(r.outcome);
  j["instances"] = r.instances;
  j["detail"] = r.detail;
  return j.dump();
}

Summary summarize(const std::vector<PropertyResult>& rs) {
  Summary s;
  for (auto& r : rs) switch (r.outcome) {
      case Outcome::Pass: ++s.pass; break;
      case Outcome::Fail: ++s.fail; break;
      case Outcome::Bound: ++s.bound; break;
      case Outcome::Skip: ++s.skip; break;
    }
  return s;
}

std::string format_human(const Summary& s) {
  return "summary: " + std::to_string(s.pass) + " pass, " + std::to_string(s.fail) + " fail, " +
         std::to_string(s.bound) + " bound, " + std::to_string(s.skip) + " skip";
}

std::string format_json(const Summary& s) {
  json j;
  j["summary"] = {{"pass", s.pass}, {"fail", s.fail}, {"bound", s.bound}, {"skip", s.skip}};
  return j.dump();
}

}  // namespace dinat
