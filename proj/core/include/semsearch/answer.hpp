#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "semsearch/corpus.hpp"
#include "semsearch/ensemble.hpp"
#include "semsearch/index.hpp"
#include "semsearch/knowledge_base.hpp"

namespace semsearch {

/// Everything needed to audit one answer end to end.
struct QueryTrace {
  std::string normalized_query;
  SentenceType sentence_type = SentenceType::kUnknown;
  std::vector<Replacement> expansions;
  std::vector<RouteStep> votes;
  std::vector<CategoryPath> routed_paths;
  std::vector<Hit> hits;
  std::optional<KbRow> kb_row;
};

struct Answer {
  std::string text;
  std::vector<std::string> supporting_ids;  // score order
  bool found = false;                       // false: `text` is the no-answer notice
  QueryTrace trace;
};

struct AnswerOptions {
  double threshold = 0.2;  // minimum score for a hit to join a composed answer
};

/// Interrogative queries first try the knowledge base: a row matches when
/// every word of its subject or of its relation occurs among the query's
/// content words (each also tried in root-verb reduced form) and its
/// source sentence is among the hits; rows matching on both fields win,
/// then the better-ranked source sentence, then file order. The answer is
/// "<object>: <source sentence>". Otherwise hits scoring at least the
/// threshold (always the top hit) are joined with single spaces in score
/// order. `records` are indexed by Hit::doc.
Answer extract_answer(std::span<const Token> query_tokens, const QueryAnalysis& analysis,
                      const HitList& hits, const KnowledgeBase& kb,
                      std::span<const SentenceRecord> records, const SuffixTable& suffixes,
                      const AnswerOptions& options = {});

}  // namespace semsearch
