#include "semsearch/answer.hpp"

#include <set>

#include "io_util.hpp"

namespace semsearch {
namespace {

std::set<std::string, std::less<>> content_terms(std::span<const Token> tokens,
                                                 const QueryAnalysis& analysis,
                                                 const SuffixTable& suffixes) {
  std::set<std::string, std::less<>> terms;
  for (const auto& tag : analysis.tags) {
    if (tag.kind != WordClass::kContentWord) continue;
    const std::string& word = tokens[tag.token_index].normalized;
    terms.insert(word);
    if (const auto verb = extract_root_verb(word, suffixes)) terms.insert(verb->root);
  }
  return terms;
}

bool field_matches(std::string_view field, const std::set<std::string, std::less<>>& terms,
                   const SuffixTable& suffixes) {
  bool any = false;
  for (std::string_view word : detail::split(field, ' ')) {
    if (word.empty()) continue;
    any = true;
    if (terms.contains(word)) continue;
    const auto verb = extract_root_verb(word, suffixes);
    if (!verb || !terms.contains(verb->root)) return false;
  }
  return any;
}

}  // namespace

Answer extract_answer(std::span<const Token> query_tokens, const QueryAnalysis& analysis,
                      const HitList& hits, const KnowledgeBase& kb,
                      std::span<const SentenceRecord> records, const SuffixTable& suffixes,
                      const AnswerOptions& options) {
  Answer answer;
  answer.trace.sentence_type = analysis.sentence_type;
  answer.trace.hits = hits.hits;
  if (hits.hits.empty()) {
    answer.text = hits.notice.value_or(std::string(no_answer_notice()));
    return answer;
  }
  answer.found = true;

  if (analysis.sentence_type == SentenceType::kInterrogative && !kb.empty()) {
    const auto terms = content_terms(query_tokens, analysis, suffixes);
    const KbRow* best = nullptr;
    std::size_t best_hit = 0;
    int best_fields = 0;
    for (const auto& row : kb.rows()) {
      const int fields = static_cast<int>(field_matches(row.subject, terms, suffixes)) +
                         static_cast<int>(field_matches(row.relation, terms, suffixes));
      if (fields == 0) continue;
      std::size_t rank = hits.hits.size();
      for (std::size_t i = 0; i < hits.hits.size(); ++i) {
        if (hits.hits[i].id == row.sentence_id) {
          rank = i;
          break;
        }
      }
      if (rank == hits.hits.size()) continue;
      if (best == nullptr || fields > best_fields || (fields == best_fields && rank < best_hit)) {
        best = &row;
        best_fields = fields;
        best_hit = rank;
      }
    }
    if (best != nullptr) {
      const auto& hit = hits.hits[best_hit];
      answer.text = best->object + ": " + records[hit.doc].raw_text;
      answer.supporting_ids = {hit.id};
      answer.trace.kb_row = *best;
      return answer;
    }
  }

  for (std::size_t i = 0; i < hits.hits.size(); ++i) {
    const auto& hit = hits.hits[i];
    if (i > 0 && hit.score < options.threshold) break;
    if (i > 0) answer.text += ' ';
    answer.text += records[hit.doc].raw_text;
    answer.supporting_ids.push_back(hit.id);
  }
  return answer;
}

}  // namespace semsearch
