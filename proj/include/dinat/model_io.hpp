#pragma once

#include <string>

#include "dinat/model.hpp"

namespace dinat {

// Reads the JSON model format; the result is validated. Errors are Model
// errors, or Io for unreadable files.
Model parse_model(const std::string& text, const std::string& source = "");
Model load_model(const std::string& path);
// Canonical JSON (two-space indent, trailing newline); parse_model inverts it.
std::string model_to_json(const Model& m);

std::string read_file(const std::string& path);

}  // namespace dinat
