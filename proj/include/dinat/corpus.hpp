#pragma once

#include <string>
#include <utility>
#include <vector>

#include "dinat/model.hpp"
#include "dinat/verify.hpp"

namespace dinat {

struct CorpusEntry {
  std::string name, file, text;
  bool positive = true;
};

// Shipped entries, in manifest order.
std::vector<CorpusEntry> corpus_entries();
// Entries from a directory holding a MANIFEST and its files.
std::vector<CorpusEntry> load_corpus(const std::string& dir);
std::vector<CorpusEntry> parse_manifest(const std::string& manifest,
                                        const std::vector<std::pair<std::string, std::string>>& files);

// Deterministic suite: walking arrow, discrete 2, chain of 3, idempotent
// monoid and the empty category, with two or three interpretations each.
std::vector<Model> model_suite();
// Signature of everything the suite models interpret.
Signature suite_signature();

// Checks the entry, then (positive entries) verifies it on every model;
// negative entries must be rejected with the declared class.
std::vector<PropertyResult> run_entry(const CorpusEntry& e, const std::vector<Model>& models,
                                      const VerifyOptions& opt);

// embedded data
const char* corpus_manifest();
const std::vector<std::pair<std::string, std::string>>& corpus_files();

}  // namespace dinat
