#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "semsearch/category_tree.hpp"
#include "semsearch/features.hpp"
#include "semsearch/morphology.hpp"

namespace semsearch {

/// A labeled sentence as read from disk, before any processing.
struct CorpusRecord {
  std::string id;
  CategoryPath category_path;
  std::string text;

  friend bool operator==(const CorpusRecord&, const CorpusRecord&) = default;
};

/// One JSON object per line: {"id": str, "category_path": [str, ...],
/// "text": str}. Blank lines are skipped. Throws Error(kParse) naming
/// source and line for malformed records.
std::vector<CorpusRecord> parse_corpus_jsonl(std::string_view contents, const std::string& source);

/// `<root>/<class>/<subclass>/<file>.txt`, one sentence per line. Ids are
/// `<relative file path>:<line>` with a zero-padded line number.
std::vector<CorpusRecord> read_corpus_directory(const std::filesystem::path& root);

/// Directory layout when `source` is a directory, JSONL otherwise.
std::vector<CorpusRecord> read_corpus(const std::filesystem::path& source);

std::string to_jsonl(const std::vector<CorpusRecord>& records);

/// Sorts by id and files every record into a tree built from the observed
/// paths. Throws Error(kData) for an empty corpus or a duplicate id.
CategoryTree build_category_tree(std::vector<CorpusRecord>& records);

/// A repository sentence after normalization, tokenization, analysis and
/// vectorization.
struct SentenceRecord {
  std::string id;
  CategoryPath category_path;
  std::string raw_text;
  std::string text;  // normalized
  TokenList tokens;
  QueryAnalysis analysis;
  FeatureVector features;
};

}  // namespace semsearch
