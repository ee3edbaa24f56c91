#include "dinat/error.hpp"

namespace dinat {

const char* kind_name(ErrorKind k) {
  switch (k) {
    case ErrorKind::Parse: return "ParseError";
    case ErrorKind::SchemaMismatch: return "SchemaMismatch";
    case ErrorKind::VarianceViolation: return "VarianceViolation";
    case ErrorKind::UnboundVariable: return "UnboundVariable";
    case ErrorKind::ArityMismatch: return "ArityMismatch";
    case ErrorKind::TypeMismatch: return "TypeMismatch";
    case ErrorKind::Io: return "IoError";
    case ErrorKind::Model: return "ModelError";
    case ErrorKind::BoundExceeded: return "BoundExceeded";
    case ErrorKind::Soundness: return "SoundnessBug";
  }
  return "Error";
}

bool kind_from_name(const std::string& s, ErrorKind& out) {
  for (int i = 0; i <= static_cast<int>(ErrorKind::Soundness); ++i)
    if (s == kind_name(static_cast<ErrorKind>(i))) {
      out = static_cast<ErrorKind>(i);
      return true;
    }
  return false;
}

static std::string render(ErrorKind kind, const std::string& node, const std::string& msg) {
  std::string s = kind_name(kind);
  if (!node.empty()) s += " at " + node;
  return s + ": " + msg;
}

Error::Error(ErrorKind k, std::string msg)
    : std::runtime_error(render(k, "", msg)), kind(k), message(std::move(msg)) {}

Error::Error(ErrorKind k, std::string n, std::string msg)
    : std::runtime_error(render(k, n, msg)), kind(k), node(std::move(n)), message(std::move(msg)) {}

Error variance_error(std::string node, std::string var, std::string where, std::string message) {
  Error e(ErrorKind::VarianceViolation, std::move(node), std::move(message));
  e.var = std::move(var);
  e.where = std::move(where);
  return e;
}

}  // namespace dinat
