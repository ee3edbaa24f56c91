#pragma once

#include <stdexcept>
#include <string>

namespace dinat {

enum class ErrorKind {
  Parse,
  SchemaMismatch,
  VarianceViolation,
  UnboundVariable,
  ArityMismatch,
  TypeMismatch,
  Io,
  Model,
  BoundExceeded,
  Soundness,
};

const char* kind_name(ErrorKind k);
bool kind_from_name(const std::string& s, ErrorKind& out);

// Single error type for the whole library. `node` is the path of the
// offending derivation node (kernel), `var`/`where` locate variance errors.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, std::string message);
  Error(ErrorKind kind, std::string node, std::string message);

  ErrorKind kind;
  std::string node;
  std::string message;
  std::string var;
  std::string where;
  int line = 0, col = 0;  // parse errors
};

Error variance_error(std::string node, std::string var, std::string where,
                     std::string message);

}  // namespace dinat
