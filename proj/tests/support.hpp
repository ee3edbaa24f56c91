#pragma once

#include <random>
#include <set>
#include <string>

#include "dinat/gen.hpp"
#include "dinat/model_io.hpp"
#include "dinat/textio.hpp"
#include "dinat/verify.hpp"

namespace dinat::test {

// Walking arrow a -f-> b with P(a) = {0}, P(b) = {0, 1}, P(f): 0 |-> 0.
inline const char* kArrowModel = R"({
  "name": "two",
  "objects": ["a", "b"],
  "morphisms": [{"name": "f", "src": "a", "dst": "b"}],
  "composition": [],
  "atoms": {
    "P": {
      "slots": [{"cat": "C", "pol": "+"}],
      "sets": [{"at": ["a"], "elems": ["0"]}, {"at": ["b"], "elems": ["0", "1"]}],
      "actions": [{"slot": 0, "mor": "f", "from": ["a"], "map": {"0": "0"}}]
    }
  }
})";

inline std::string tuple_string_of(const std::vector<Value>& vs) {
  std::string s = "(";
  for (size_t i = 0; i < vs.size(); ++i) s += (i ? ", " : "") + vs[i].to_string();
  return s + ")";
}

inline Model arrow_model() { return parse_model(kArrowModel, "two"); }

inline Signature sig_of(const std::string& decls) { return parse_derivation(decls).sig; }

// Random well-formed formulas over C with atoms P(+C) and R(-C,+C). Every
// annotation is the polarity its position computes to.
struct FormulaGen {
  std::mt19937_64 rng;
  int fresh = 0;

  explicit FormulaGen(std::uint64_t seed) : rng(seed) {}

  int pick(int n) { return std::uniform_int_distribution<int>(0, n - 1)(rng); }

  Term v(const std::vector<std::string>& vars, Polarity p) { return var(vars[pick(static_cast<int>(vars.size()))], p); }

  Form gen(int depth, Polarity sign, std::vector<std::string> vars) {
    Cat c = cat_base("C");
    int k = depth <= 0 ? pick(3) : pick(7);
    switch (k) {
      case 0: return top();
      case 1: return hom(c, v(vars, flip(sign)), v(vars, sign));
      case 2: return pick(2) ? atom("P", {v(vars, sign)}) : atom("R", {v(vars, flip(sign)), v(vars, sign)});
      case 3: return conj(gen(depth - 1, sign, vars), gen(depth - 1, sign, vars));
      case 4: return imp(gen(depth - 1, flip(sign), vars), gen(depth - 1, sign, vars));
      default: {
        std::string x = "x" + std::to_string(fresh++);
        vars.push_back(x);
        Form body = gen(depth - 1, sign, vars);
        return k == 5 ? end_(x, c, body) : coend(x, c, body);
      }
    }
  }
};

inline Signature gen_signature() { return sig_of("category C\natom P(+C)\natom R(-C, +C)\n"); }

}  // namespace dinat::test
