#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "semsearch/text.hpp"

namespace semsearch {

/// Tense subtypes of the verb suffix inventory, in table order.
enum class Tense {
  kSimplePresent,
  kPresentContinuous,
  kPresentPerfect,
  kSimplePast,
  kPastContinuous,
  kPastPerfect,
  kHabitualPast,
  kSimpleFuture,
  kFutureContinuous,
  kFuturePerfect,
};
inline constexpr std::size_t kTenseCount = 10;

enum class Person { kFirst, kSecond, kThird };
inline constexpr std::size_t kPersonCount = 3;

std::string_view to_string(Tense tense) noexcept;
std::string_view to_string(Person person) noexcept;
std::optional<Tense> parse_tense(std::string_view name) noexcept;
std::optional<Person> parse_person(std::string_view name) noexcept;

struct SuffixEntry {
  std::string suffix;  // normalized
  Tense tense;
  std::optional<Person> person;

  friend bool operator==(const SuffixEntry&, const SuffixEntry&) = default;
};

/// Immutable verb-suffix inventory with longest-suffix lookup.
///
/// File format: UTF-8 TSV rows `tense_subtype<TAB>person<TAB>suffix`, where
/// person is First/Second/Third or empty. Lines starting with '#' and blank
/// lines are ignored.
class SuffixTable {
 public:
  /// Throws Error(kData) on an empty entry list or a repeated
  /// (suffix, tense) pair.
  explicit SuffixTable(std::vector<SuffixEntry> entries);

  static SuffixTable load(const std::filesystem::path& path);
  static SuffixTable parse(std::string_view contents, std::string_view source_name);

  std::span<const SuffixEntry> entries() const noexcept { return entries_; }
  std::size_t size() const noexcept { return entries_.size(); }
  std::size_t tense_count() const;

  /// First entry (file order) whose suffix equals `suffix` exactly.
  const SuffixEntry* lookup(std::string_view suffix) const;

  /// Entries whose suffix ends `word`, longest first; entries of equal
  /// length keep file order.
  std::vector<const SuffixEntry*> matching_suffixes(std::string_view word) const;

  /// Serialized back to the TSV format (used when copying into a state dir).
  std::string to_tsv() const;

 private:
  struct Node {
    std::map<char32_t, std::unique_ptr<Node>> children;
    std::vector<std::size_t> entry_ids;
  };

  void index_entry(std::size_t id);

  std::vector<SuffixEntry> entries_;
  std::shared_ptr<Node> reversed_trie_;
};

struct VerbAnalysis {
  std::string root;
  std::string suffix;
  Tense tense;
  std::optional<Person> person;

  friend bool operator==(const VerbAnalysis&, const VerbAnalysis&) = default;
};

/// Strips the longest table suffix that leaves a root of at least one
/// grapheme cluster. Absent when no suffix matches, i.e. the word is not a
/// verb.
std::optional<VerbAnalysis> extract_root_verb(std::string_view word,
                                              const SuffixTable& table);

enum class WordClass { kFunctionWord, kContentWord };

struct WordClassTag {
  std::size_t token_index;
  WordClass kind;
};

/// Closed-class word list, one word per line.
class FunctionWordLexicon {
 public:
  FunctionWordLexicon() = default;
  explicit FunctionWordLexicon(std::set<std::string> words);

  static FunctionWordLexicon load(const std::filesystem::path& path);
  static FunctionWordLexicon parse(std::string_view contents);

  bool contains(std::string_view word) const;
  std::size_t size() const noexcept { return words_.size(); }
  const std::set<std::string, std::less<>>& words() const noexcept { return words_; }

 private:
  std::set<std::string, std::less<>> words_;
};

std::vector<WordClassTag> tag_function_words(std::span<const Token> tokens,
                                             const FunctionWordLexicon& lexicon);

/// Decides which tokens are verb candidates. Stands in for an external POS
/// tagger; implementations must be stateless.
class VerbTagger {
 public:
  virtual ~VerbTagger() = default;
  virtual bool is_verb_candidate(std::span<const Token> tokens,
                                 std::span<const WordClassTag> tags,
                                 std::size_t index,
                                 const SuffixTable& table) const = 0;
};

/// Content word that is either the last content word of the sentence or
/// ends in a table suffix.
class SuffixShapeTagger final : public VerbTagger {
 public:
  bool is_verb_candidate(std::span<const Token> tokens,
                         std::span<const WordClassTag> tags, std::size_t index,
                         const SuffixTable& table) const override;
};

const VerbTagger& default_verb_tagger();

struct VerbOccurrence {
  std::size_t token_index;
  VerbAnalysis analysis;
};

struct QueryAnalysis {
  SentenceType sentence_type = SentenceType::kUnknown;
  std::vector<WordClassTag> tags;
  std::vector<VerbOccurrence> verbs;  // token order
  std::optional<Tense> tense;         // of the main (last) verb
  std::optional<Person> person;
  std::size_t function_words = 0;
  std::size_t content_words = 0;
  std::size_t subject_count = 0;
  std::size_t object_count = 0;

  const VerbOccurrence* main_verb() const noexcept {
    return verbs.empty() ? nullptr : &verbs.back();
  }
};

/// Grammatical summary of one sentence. Throws Error(kData) on an empty
/// token list.
QueryAnalysis analyze_query(std::span<const Token> tokens, const SuffixTable& table,
                            const FunctionWordLexicon& lexicon,
                            const VerbTagger& tagger = default_verb_tagger());

}  // namespace semsearch
