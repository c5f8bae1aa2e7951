#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace semsearch {

enum class Script { kBengali, kLatin, kDigit, kPunct, kOther };

enum class SentenceType {
  kDeclarative,
  kInterrogative,
  kExclamatory,
  kImperative,
  kUnknown,
};

inline constexpr std::size_t kSentenceTypeCount = 5;

std::string_view to_string(Script script) noexcept;
std::string_view to_string(SentenceType type) noexcept;

/// Half-open range of code point offsets into the tokenized text.
struct CharSpan {
  std::size_t begin = 0;
  std::size_t end = 0;

  std::size_t size() const noexcept { return end - begin; }
  friend bool operator==(const CharSpan&, const CharSpan&) = default;
};

struct Token {
  std::string surface;
  std::string normalized;  // composed; Latin lowercased
  Script script = Script::kOther;
  CharSpan span;

  bool is_punct() const noexcept { return script == Script::kPunct; }
};

using TokenList = std::vector<Token>;

/// Canonical composition, whitespace collapsing and trimming, and removal
/// of zero-width (non-)joiners at token boundaries. Joiners between two
/// letters are kept. Characters whose canonical decomposition is excluded
/// from standard recomposition (e.g. U+09DF) are recomposed, so the output
/// never has more code points than the input.
///
/// Throws EncodingError carrying the byte offset of the first invalid
/// sequence.
std::string normalize(std::string_view raw);

/// Splits normalized text into word and punctuation tokens. Words are runs
/// of whole grapheme clusters; each punctuation or symbol cluster is its own
/// token.
TokenList tokenize(std::string_view text);

/// Splits on danda, double danda, '?', '!' and '.', keeping each run of
/// terminators with the sentence it closes. Never emits an empty sentence.
std::vector<std::string> split_sentences(std::string_view text);

/// Maps the closing punctuation of one sentence to its type. Imperatives
/// have no punctuation cue, so they come back as kUnknown.
SentenceType detect_sentence_type(std::span<const Token> tokens) noexcept;

bool is_sentence_terminator(char32_t c) noexcept;

std::size_t count_code_points(std::string_view utf8);
std::size_t count_grapheme_clusters(std::string_view utf8);

/// Decodes valid UTF-8 into code points; throws EncodingError otherwise.
std::u32string decode_utf8(std::string_view utf8);
std::string encode_utf8(std::u32string_view text);

}  // namespace semsearch
