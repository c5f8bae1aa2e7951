#include "semsearch/morphology.hpp"

#include <algorithm>
#include <array>
#include <sstream>

#include "io_util.hpp"
#include "semsearch/error.hpp"

namespace semsearch {
namespace {

constexpr std::array<std::string_view, kTenseCount> kTenseNames{
    "SimplePresent", "PresentContinuous", "PresentPerfect", "SimplePast",
    "PastContinuous", "PastPerfect",      "HabitualPast",   "SimpleFuture",
    "FutureContinuous", "FuturePerfect",
};

constexpr std::array<std::string_view, kPersonCount> kPersonNames{"First", "Second",
                                                                  "Third"};

// Objective-case and classifier endings that mark a content word as object.
constexpr std::array<std::string_view, 2> kObjectMarkers{"কে", "টি"};

bool ends_with_object_marker(std::string_view word) {
  for (std::string_view marker : kObjectMarkers) {
    if (word.size() > marker.size() && word.ends_with(marker)) return true;
  }
  return false;
}

}  // namespace

std::string_view to_string(Tense tense) noexcept {
  return kTenseNames[static_cast<std::size_t>(tense)];
}

std::string_view to_string(Person person) noexcept {
  return kPersonNames[static_cast<std::size_t>(person)];
}

std::optional<Tense> parse_tense(std::string_view name) noexcept {
  for (std::size_t i = 0; i < kTenseNames.size(); ++i) {
    if (kTenseNames[i] == name) return static_cast<Tense>(i);
  }
  return std::nullopt;
}

std::optional<Person> parse_person(std::string_view name) noexcept {
  for (std::size_t i = 0; i < kPersonNames.size(); ++i) {
    if (kPersonNames[i] == name) return static_cast<Person>(i);
  }
  if (name == "1") return Person::kFirst;
  if (name == "2") return Person::kSecond;
  if (name == "3") return Person::kThird;
  return std::nullopt;
}

SuffixTable::SuffixTable(std::vector<SuffixEntry> entries)
    : entries_(std::move(entries)), reversed_trie_(std::make_shared<Node>()) {
  if (entries_.empty()) throw Error(ErrorCode::kData, "suffix table is empty");
  std::set<std::pair<std::string, Tense>> seen;
  for (std::size_t id = 0; id < entries_.size(); ++id) {
    const SuffixEntry& e = entries_[id];
    if (e.suffix.empty()) throw Error(ErrorCode::kData, "suffix table has an empty suffix");
    if (!seen.emplace(e.suffix, e.tense).second) {
      throw Error(ErrorCode::kData, "duplicate suffix row '" + e.suffix + "' for " +
                                        std::string(to_string(e.tense)));
    }
    index_entry(id);
  }
}

void SuffixTable::index_entry(std::size_t id) {
  const std::u32string cps = decode_utf8(entries_[id].suffix);
  Node* node = reversed_trie_.get();
  for (auto it = cps.rbegin(); it != cps.rend(); ++it) {
    auto& child = node->children[*it];
    if (!child) child = std::make_unique<Node>();
    node = child.get();
  }
  node->entry_ids.push_back(id);
}

SuffixTable SuffixTable::load(const std::filesystem::path& path) {
  return parse(detail::read_file(path), path.string());
}

SuffixTable SuffixTable::parse(std::string_view contents, std::string_view source_name) {
  std::vector<SuffixEntry> entries;
  detail::for_each_line(contents, [&](std::size_t line_no, std::string_view line) {
    if (detail::is_comment_or_blank(line)) return;
    const auto fields = detail::split(line, '\t');
    auto fail = [&](const std::string& what) {
      throw Error(ErrorCode::kParse, std::string(source_name) + ":" +
                                         std::to_string(line_no) + ": " + what);
    };
    if (fields.size() != 3) fail("expected 3 tab-separated fields");
    const auto tense = parse_tense(detail::trim(fields[0]));
    if (!tense) fail("unknown tense subtype '" + std::string(fields[0]) + "'");
    std::optional<Person> person;
    if (const auto p = detail::trim(fields[1]); !p.empty()) {
      person = parse_person(p);
      if (!person) fail("unknown person '" + std::string(p) + "'");
    }
    const std::string suffix = normalize(detail::trim(fields[2]));
    if (suffix.empty()) fail("empty suffix");
    entries.push_back({suffix, *tense, person});
  });
  if (entries.empty()) {
    throw Error(ErrorCode::kData, std::string(source_name) + ": no suffix rows");
  }
  return SuffixTable(std::move(entries));
}

std::size_t SuffixTable::tense_count() const {
  std::set<Tense> tenses;
  for (const auto& e : entries_) tenses.insert(e.tense);
  return tenses.size();
}

const SuffixEntry* SuffixTable::lookup(std::string_view suffix) const {
  for (const auto& e : entries_) {
    if (e.suffix == suffix) return &e;
  }
  return nullptr;
}

std::vector<const SuffixEntry*> SuffixTable::matching_suffixes(std::string_view word) const {
  const std::u32string cps = decode_utf8(word);
  std::vector<const SuffixEntry*> found;
  const Node* node = reversed_trie_.get();
  for (auto it = cps.rbegin(); it != cps.rend(); ++it) {
    const auto child = node->children.find(*it);
    if (child == node->children.end()) break;
    node = child->second.get();
    for (std::size_t id : node->entry_ids) found.push_back(&entries_[id]);
  }
  // Deeper trie nodes are longer suffixes; reverse depth order, keep file
  // order within one depth.
  std::stable_sort(found.begin(), found.end(), [](const SuffixEntry* a, const SuffixEntry* b) {
    return a->suffix.size() > b->suffix.size();
  });
  return found;
}

std::string SuffixTable::to_tsv() const {
  std::ostringstream out;
  out << "# tense_subtype\tperson\tsuffix\n";
  for (const auto& e : entries_) {
    out << to_string(e.tense) << '\t' << (e.person ? to_string(*e.person) : "") << '\t'
        << e.suffix << '\n';
  }
  return out.str();
}

std::optional<VerbAnalysis> extract_root_verb(std::string_view word, const SuffixTable& table) {
  for (const SuffixEntry* entry : table.matching_suffixes(word)) {
    if (entry->suffix.size() >= word.size()) continue;
    std::string_view root = word.substr(0, word.size() - entry->suffix.size());
    if (count_grapheme_clusters(root) < 1) continue;
    return VerbAnalysis{std::string(root), entry->suffix, entry->tense, entry->person};
  }
  return std::nullopt;
}

FunctionWordLexicon::FunctionWordLexicon(std::set<std::string> words)
    : words_(words.begin(), words.end()) {}

FunctionWordLexicon FunctionWordLexicon::load(const std::filesystem::path& path) {
  return parse(detail::read_file(path));
}

FunctionWordLexicon FunctionWordLexicon::parse(std::string_view contents) {
  std::set<std::string> words;
  detail::for_each_line(contents, [&](std::size_t, std::string_view line) {
    if (detail::is_comment_or_blank(line)) return;
    words.insert(normalize(detail::trim(line)));
  });
  return FunctionWordLexicon(std::move(words));
}

bool FunctionWordLexicon::contains(std::string_view word) const {
  return words_.find(word) != words_.end();
}

std::vector<WordClassTag> tag_function_words(std::span<const Token> tokens,
                                             const FunctionWordLexicon& lexicon) {
  std::vector<WordClassTag> tags;
  tags.reserve(tokens.size());
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    const bool function_word = tokens[i].is_punct() || lexicon.contains(tokens[i].normalized);
    tags.push_back({i, function_word ? WordClass::kFunctionWord : WordClass::kContentWord});
  }
  return tags;
}

bool SuffixShapeTagger::is_verb_candidate(std::span<const Token> tokens,
                                          std::span<const WordClassTag> tags,
                                          std::size_t index,
                                          const SuffixTable& table) const {
  if (tags[index].kind != WordClass::kContentWord) return false;
  if (tokens[index].script != Script::kBengali) return false;
  bool last_content = true;
  for (std::size_t j = index + 1; j < tags.size(); ++j) {
    if (tags[j].kind == WordClass::kContentWord) {
      last_content = false;
      break;
    }
  }
  return last_content || !table.matching_suffixes(tokens[index].normalized).empty();
}

const VerbTagger& default_verb_tagger() {
  static const SuffixShapeTagger tagger;
  return tagger;
}

QueryAnalysis analyze_query(std::span<const Token> tokens, const SuffixTable& table,
                            const FunctionWordLexicon& lexicon, const VerbTagger& tagger) {
  if (tokens.empty()) throw Error(ErrorCode::kData, "cannot analyze an empty token list");

  QueryAnalysis out;
  out.sentence_type = detect_sentence_type(tokens);
  out.tags = tag_function_words(tokens, lexicon);

  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (out.tags[i].kind == WordClass::kFunctionWord) {
      ++out.function_words;
      continue;
    }
    ++out.content_words;
    if (!tagger.is_verb_candidate(tokens, out.tags, i, table)) continue;
    if (auto analysis = extract_root_verb(tokens[i].normalized, table)) {
      out.verbs.push_back({i, std::move(*analysis)});
    }
  }

  std::size_t limit = tokens.size();
  if (const VerbOccurrence* verb = out.main_verb()) {
    out.tense = verb->analysis.tense;
    out.person = verb->analysis.person;
    limit = verb->token_index;
  }
  for (std::size_t i = 0; i < limit; ++i) {
    if (out.tags[i].kind != WordClass::kContentWord) continue;
    if (ends_with_object_marker(tokens[i].normalized)) {
      ++out.object_count;
    } else {
      ++out.subject_count;
    }
  }
  return out;
}

}  // namespace semsearch
