#include "semsearch/text.hpp"

#include <unicode/brkiter.h>
#include <unicode/locid.h>
#include <unicode/normalizer2.h>
#include <unicode/uchar.h>
#include <unicode/unistr.h>
#include <unicode/uscript.h>
#include <unicode/utf8.h>

#include <algorithm>
#include <array>
#include <map>
#include <memory>
#include <mutex>
#include <utility>

#include "semsearch/error.hpp"

namespace semsearch {
namespace {

constexpr char32_t kZeroWidthNonJoiner = 0x200C;
constexpr char32_t kZeroWidthJoiner = 0x200D;

bool is_joiner(char32_t c) {
  return c == kZeroWidthJoiner || c == kZeroWidthNonJoiner;
}

bool is_space(char32_t c) { return u_isUWhiteSpace(static_cast<UChar32>(c)); }

bool is_punct_or_symbol(char32_t c) {
  switch (u_charType(static_cast<UChar32>(c))) {
    case U_DASH_PUNCTUATION:
    case U_START_PUNCTUATION:
    case U_END_PUNCTUATION:
    case U_CONNECTOR_PUNCTUATION:
    case U_OTHER_PUNCTUATION:
    case U_INITIAL_PUNCTUATION:
    case U_FINAL_PUNCTUATION:
    case U_MATH_SYMBOL:
    case U_CURRENCY_SYMBOL:
    case U_MODIFIER_SYMBOL:
    case U_OTHER_SYMBOL:
      return true;
    default:
      return false;
  }
}

const icu::Normalizer2& nfc() {
  UErrorCode status = U_ZERO_ERROR;
  const icu::Normalizer2* instance = icu::Normalizer2::getNFCInstance(status);
  if (U_FAILURE(status) || instance == nullptr) {
    throw Error(ErrorCode::kInvariant, "ICU NFC normalizer unavailable");
  }
  return *instance;
}

// Pairs (first, second) -> precomposed character for every character that
// NFC decomposes but refuses to recompose.
using ExclusionMap = std::map<std::pair<char32_t, char32_t>, char32_t>;

const ExclusionMap& exclusion_pairs() {
  static const ExclusionMap pairs = [] {
    ExclusionMap out;
    const icu::Normalizer2& norm = nfc();
    for (UChar32 c = 0; c <= 0x10FFFF; ++c) {
      if (!u_hasBinaryProperty(c, UCHAR_FULL_COMPOSITION_EXCLUSION)) continue;
      icu::UnicodeString raw;
      if (!norm.getRawDecomposition(c, raw)) continue;
      if (raw.countChar32() != 2) continue;
      const UChar32 first = raw.char32At(0);
      const UChar32 second = raw.char32At(raw.moveIndex32(0, 1));
      out.emplace(std::pair{static_cast<char32_t>(first),
                            static_cast<char32_t>(second)},
                  static_cast<char32_t>(c));
    }
    return out;
  }();
  return pairs;
}

std::u32string recompose_exclusions(std::u32string text) {
  const ExclusionMap& pairs = exclusion_pairs();
  std::u32string out;
  out.reserve(text.size());
  for (char32_t c : text) {
    out.push_back(c);
    while (out.size() >= 2) {
      auto it = pairs.find({out[out.size() - 2], out.back()});
      if (it == pairs.end()) break;
      out.pop_back();
      out.back() = it->second;
    }
  }
  return out;
}

std::u32string to_u32(const icu::UnicodeString& s) {
  std::u32string out;
  out.reserve(static_cast<std::size_t>(s.length()));
  for (int32_t i = 0; i < s.length();) {
    const UChar32 c = s.char32At(i);
    out.push_back(static_cast<char32_t>(c));
    i = s.moveIndex32(i, 1);
  }
  return out;
}

icu::UnicodeString to_icu(std::u32string_view s) {
  icu::UnicodeString out;
  for (char32_t c : s) out.append(static_cast<UChar32>(c));
  return out;
}

// A joiner run is dropped when it touches whitespace, punctuation, or an
// edge of the text.
std::u32string strip_boundary_joiners(const std::u32string& text) {
  auto is_boundary = [](char32_t c) { return is_space(c) || is_punct_or_symbol(c); };
  std::u32string out;
  out.reserve(text.size());
  std::size_t i = 0;
  while (i < text.size()) {
    if (!is_joiner(text[i])) {
      out.push_back(text[i++]);
      continue;
    }
    std::size_t end = i;
    while (end < text.size() && is_joiner(text[end])) ++end;
    const bool left_edge = i == 0 || is_boundary(text[i - 1]);
    const bool right_edge = end == text.size() || is_boundary(text[end]);
    if (!left_edge && !right_edge) out.append(text, i, end - i);
    i = end;
  }
  return out;
}

std::u32string collapse_whitespace(const std::u32string& text) {
  std::u32string out;
  out.reserve(text.size());
  bool pending_space = false;
  for (char32_t c : text) {
    if (is_space(c)) {
      pending_space = true;
      continue;
    }
    if (pending_space && !out.empty()) out.push_back(U' ');
    pending_space = false;
    out.push_back(c);
  }
  return out;
}

Script classify_code_point(char32_t c) {
  const auto uc = static_cast<UChar32>(c);
  if (u_charType(uc) == U_DECIMAL_DIGIT_NUMBER) return Script::kDigit;
  UErrorCode status = U_ZERO_ERROR;
  const UScriptCode script = uscript_getScript(uc, &status);
  if (U_FAILURE(status)) return Script::kOther;
  if (script == USCRIPT_BENGALI) return Script::kBengali;
  if (script == USCRIPT_LATIN) return Script::kLatin;
  return Script::kOther;
}

// Script with the most code points; joiners and combining marks of the
// inherited/common scripts do not vote.
Script dominant_script(std::u32string_view word) {
  std::array<std::size_t, 4> votes{};  // Bengali, Latin, Digit, Other
  for (char32_t c : word) {
    const auto uc = static_cast<UChar32>(c);
    UErrorCode status = U_ZERO_ERROR;
    const UScriptCode script = uscript_getScript(uc, &status);
    const bool neutral = script == USCRIPT_INHERITED || script == USCRIPT_COMMON;
    switch (classify_code_point(c)) {
      case Script::kBengali: ++votes[0]; break;
      case Script::kLatin: ++votes[1]; break;
      case Script::kDigit: ++votes[2]; break;
      default:
        if (!neutral) ++votes[3];
        break;
    }
  }
  constexpr std::array<Script, 4> order{Script::kBengali, Script::kLatin,
                                        Script::kDigit, Script::kOther};
  std::size_t best = 0;
  for (std::size_t i = 1; i < votes.size(); ++i) {
    if (votes[i] > votes[best]) best = i;
  }
  return votes[best] == 0 ? Script::kOther : order[best];
}

std::string lowercase(std::u32string_view word) {
  std::u32string lowered;
  lowered.reserve(word.size());
  for (char32_t c : word) {
    lowered.push_back(static_cast<char32_t>(u_tolower(static_cast<UChar32>(c))));
  }
  return encode_utf8(lowered);
}

std::unique_ptr<icu::BreakIterator> grapheme_iterator(const icu::UnicodeString& text) {
  UErrorCode status = U_ZERO_ERROR;
  std::unique_ptr<icu::BreakIterator> it(
      icu::BreakIterator::createCharacterInstance(icu::Locale::getRoot(), status));
  if (U_FAILURE(status) || !it) {
    throw Error(ErrorCode::kInvariant, "ICU grapheme break iterator unavailable");
  }
  it->setText(text);
  return it;
}

}  // namespace

std::string_view to_string(Script script) noexcept {
  switch (script) {
    case Script::kBengali: return "Bengali";
    case Script::kLatin: return "Latin";
    case Script::kDigit: return "Digit";
    case Script::kPunct: return "Punct";
    case Script::kOther: return "Other";
  }
  return "Other";
}

std::string_view to_string(SentenceType type) noexcept {
  switch (type) {
    case SentenceType::kDeclarative: return "Declarative";
    case SentenceType::kInterrogative: return "Interrogative";
    case SentenceType::kExclamatory: return "Exclamatory";
    case SentenceType::kImperative: return "Imperative";
    case SentenceType::kUnknown: return "Unknown";
  }
  return "Unknown";
}

std::u32string decode_utf8(std::string_view utf8) {
  std::u32string out;
  out.reserve(utf8.size());
  const auto* bytes = reinterpret_cast<const uint8_t*>(utf8.data());
  const auto length = static_cast<int32_t>(utf8.size());
  int32_t i = 0;
  while (i < length) {
    const int32_t start = i;
    UChar32 c;
    U8_NEXT(bytes, i, length, c);
    if (c < 0) {
      throw EncodingError(static_cast<std::size_t>(start),
                          "invalid UTF-8 sequence at byte offset " +
                              std::to_string(start));
    }
    out.push_back(static_cast<char32_t>(c));
  }
  return out;
}

std::string encode_utf8(std::u32string_view text) {
  std::string out;
  out.reserve(text.size() * 3);
  for (char32_t c : text) {
    uint8_t buf[U8_MAX_LENGTH];
    int32_t n = 0;
    UBool error = false;
    U8_APPEND(buf, n, U8_MAX_LENGTH, static_cast<UChar32>(c), error);
    if (error) throw EncodingError(out.size(), "code point outside the Unicode range");
    out.append(reinterpret_cast<const char*>(buf), static_cast<std::size_t>(n));
  }
  return out;
}

std::size_t count_code_points(std::string_view utf8) {
  return decode_utf8(utf8).size();
}

std::size_t count_grapheme_clusters(std::string_view utf8) {
  if (utf8.empty()) return 0;
  const icu::UnicodeString text = to_icu(decode_utf8(utf8));
  auto it = grapheme_iterator(text);
  std::size_t count = 0;
  for (int32_t b = it->next(); b != icu::BreakIterator::DONE; b = it->next()) ++count;
  return count;
}

bool is_sentence_terminator(char32_t c) noexcept {
  return c == U'।' || c == U'॥' || c == U'?' || c == U'!' || c == U'.';
}

std::string normalize(std::string_view raw) {
  const std::u32string decoded = decode_utf8(raw);
  UErrorCode status = U_ZERO_ERROR;
  const icu::UnicodeString composed = nfc().normalize(to_icu(decoded), status);
  if (U_FAILURE(status)) {
    throw Error(ErrorCode::kInvariant, "canonical composition failed");
  }
  std::u32string text = recompose_exclusions(to_u32(composed));
  text = strip_boundary_joiners(text);
  return encode_utf8(collapse_whitespace(text));
}

TokenList tokenize(std::string_view text) {
  TokenList tokens;
  if (text.empty()) return tokens;
  const std::u32string decoded = decode_utf8(text);
  const icu::UnicodeString utext = to_icu(decoded);
  auto it = grapheme_iterator(utext);

  std::u32string word;
  std::size_t word_begin = 0;
  std::size_t cp_offset = 0;

  auto flush = [&] {
    if (word.empty()) return;
    Token tok;
    tok.surface = encode_utf8(word);
    tok.script = dominant_script(word);
    tok.normalized = tok.script == Script::kLatin ? lowercase(word) : tok.surface;
    tok.span = {word_begin, word_begin + word.size()};
    tokens.push_back(std::move(tok));
    word.clear();
  };

  int32_t start = it->first();
  for (int32_t end = it->next(); end != icu::BreakIterator::DONE;
       start = end, end = it->next()) {
    const std::u32string cluster = to_u32(utext.tempSubStringBetween(start, end));
    const char32_t lead = cluster.front();
    if (is_space(lead)) {
      flush();
      // A combining mark after a space joins the space's cluster; keep it
      // as the start of the next word.
      const auto mark = std::find_if_not(cluster.begin(), cluster.end(), is_space);
      if (mark != cluster.end()) {
        word_begin = cp_offset + static_cast<std::size_t>(mark - cluster.begin());
        word.assign(mark, cluster.end());
      }
    } else if (is_punct_or_symbol(lead)) {
      flush();
      Token tok;
      tok.surface = encode_utf8(cluster.substr(0, 1));
      tok.normalized = tok.surface;
      tok.script = Script::kPunct;
      tok.span = {cp_offset, cp_offset + 1};
      tokens.push_back(std::move(tok));
      // Marks attached to punctuation start the next word.
      if (cluster.size() > 1) {
        word_begin = cp_offset + 1;
        word = cluster.substr(1);
      }
    } else {
      if (word.empty()) word_begin = cp_offset;
      word += cluster;
    }
    cp_offset += cluster.size();
  }
  flush();
  return tokens;
}

std::vector<std::string> split_sentences(std::string_view text) {
  const std::u32string decoded = decode_utf8(text);
  std::vector<std::string> sentences;
  auto emit = [&](std::u32string_view piece) {
    const auto first = std::find_if_not(piece.begin(), piece.end(), is_space);
    const auto last = std::find_if_not(piece.rbegin(), piece.rend(), is_space).base();
    if (first < last) {
      sentences.push_back(encode_utf8(std::u32string_view(&*first,
                                                          static_cast<std::size_t>(last - first))));
    }
  };
  std::size_t begin = 0;
  std::size_t i = 0;
  while (i < decoded.size()) {
    if (!is_sentence_terminator(decoded[i])) {
      ++i;
      continue;
    }
    while (i < decoded.size() && is_sentence_terminator(decoded[i])) ++i;
    emit(std::u32string_view(decoded).substr(begin, i - begin));
    begin = i;
  }
  emit(std::u32string_view(decoded).substr(begin));
  return sentences;
}

SentenceType detect_sentence_type(std::span<const Token> tokens) noexcept {
  for (auto it = tokens.rbegin(); it != tokens.rend(); ++it) {
    if (!it->is_punct()) return SentenceType::kUnknown;
    const std::string& p = it->surface;
    if (p == "?") return SentenceType::kInterrogative;
    if (p == "!") return SentenceType::kExclamatory;
    if (p == "." || p == "।" || p == "॥") return SentenceType::kDeclarative;
    // closing quotes and brackets after the terminator are skipped
  }
  return SentenceType::kUnknown;
}

}  // namespace semsearch
