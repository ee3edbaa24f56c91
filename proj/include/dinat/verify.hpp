#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "dinat/finsem.hpp"
#include "dinat/textio.hpp"

namespace dinat {

enum class Outcome { Pass, Fail, Bound, Skip };
const char* outcome_name(Outcome o);  // PASS, FAIL, BOUND, SKIP

struct PropertyResult {
  std::string entry, model, property;
  Outcome outcome = Outcome::Pass;
  long instances = 0;
  std::string detail;
};

struct VerifyOptions {
  std::uint64_t seed = 0;
  size_t premise_limit = 4;  // sampled families per open premise
  long max_nodes = 2'000'000;
  bool enumerate = false;    // compare dinatural counts with ends
};

struct CheckReport {
  std::string deriv;
  std::optional<Sequent> concl;
  std::optional<Error> error;
};

std::vector<CheckReport> check_file(const DerivationFile& f);

// Families for every open premise, sampled deterministically from the
// enumeration under opt.seed. At most opt.premise_limit environments.
std::vector<FamilyEnv> premise_instances(Evaluator& ev, const std::map<std::string, Sequent>& premises,
                                         const VerifyOptions& opt);

// Identity check for a closed one-hypothesis family whose goal is the hypothesis.
bool is_identity_family(Evaluator& ev, const DinatFamily& f);

// All model-dependent properties of a file: eval:<deriv>, obligation:<name>,
// iso:<fwd>/<inv>, and with opt.enumerate count:<deriv>.
std::vector<PropertyResult> verify_file(const DerivationFile& f, const std::string& entry, const Model& m,
                                        const VerifyOptions& opt);

// Sorted by (entry, model, property).
void sort_results(std::vector<PropertyResult>& rs);

std::string format_human(const PropertyResult& r);
std::string format_json(const PropertyResult& r);
struct Summary {
  long pass = 0, fail = 0, bound = 0, skip = 0;
};
Summary summarize(const std::vector<PropertyResult>& rs);
std::string format_human(const Summary& s);
std::string format_json(const Summary& s);

}  // namespace dinat
