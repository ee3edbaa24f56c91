#pragma once

#include <string>
#include <utility>
#include <vector>

#include "dinat/kernel.hpp"

namespace dinat {

struct NamedDeriv {
  std::string name;
  Deriv deriv;
};

struct Rejection {
  std::string name;
  ErrorKind kind;
};

struct IsoPair {
  std::string fwd, inv;
};

// Contents of a .dinat file.
struct DerivationFile {
  Signature sig;
  std::vector<NamedDeriv> derivs;
  std::vector<EqJudgement> obligations;
  std::vector<Rejection> rejects;
  std::vector<IsoPair> isos;

  Defs defs() const;
  const Deriv* find(const std::string& name) const;
};

// Throws a Parse error carrying line and column and the expected tokens.
DerivationFile parse_derivation(const std::string& text, const std::string& source = "");
Sequent parse_sequent(const std::string& text);
Form parse_formula(const std::string& text);
Cat parse_cat(const std::string& text);

std::string print_deriv(const Deriv& d, int indent = 0);
std::string print_file(const DerivationFile& f);

}  // namespace dinat
