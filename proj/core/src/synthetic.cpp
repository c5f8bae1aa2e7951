#include "semsearch/synthetic.hpp"

#include <array>
#include <cstdio>
#include <string_view>

#include "semsearch/category_tree.hpp"
#include "semsearch/error.hpp"
#include "semsearch/random.hpp"

namespace semsearch {

namespace {

using Pool = std::array<std::string_view, 15>;

// Same order as default_top_categories().
constexpr std::array<Pool, 7> kKeywords = {{
    {"চিত্রকলা", "ভাস্কর্য", "লোকসংগীত", "নৃত্য", "মন্দির", "ঐতিহ্য", "উৎসব", "পটচিত্র",
     "শিল্পী", "প্রদর্শনী", "সংস্কৃতি", "আলপনা", "কারুশিল্প", "জাদুঘর", "নাট্যদল"},
    {"বাজেট", "মুদ্রাস্ফীতি", "ব্যাংক", "শেয়ারবাজার", "রপ্তানি", "আমদানি", "কর", "বিনিয়োগ",
     "সুদ", "রাজস্ব", "অর্থনীতি", "টাকা", "ঋণ", "শিল্পায়ন", "বাণিজ্য"},
    {"চলচ্চিত্র", "অভিনেতা", "অভিনেত্রী", "পরিচালক", "সিনেমা", "গান", "টেলিভিশন", "ধারাবাহিক",
     "তারকা", "প্রযোজক", "ছবি", "সুরকার", "দর্শক", "পর্দা", "বিনোদন"},
    {"উপন্যাস", "কবিতা", "কবি", "লেখক", "গল্প", "প্রবন্ধ", "সাহিত্য", "পত্রিকা", "ছড়া",
     "কাব্যগ্রন্থ", "প্রকাশক", "পাণ্ডুলিপি", "অনুবাদ", "চরিত্র", "রচনা"},
    {"নির্বাচন", "সংসদ", "মন্ত্রী", "দল", "ভোট", "সরকার", "বিধায়ক", "প্রধানমন্ত্রী", "বিরোধী",
     "আইন", "প্রার্থী", "জোট", "নীতি", "শাসন", "রাজনীতি"},
    {"ক্রিকেট", "ফুটবল", "খেলোয়াড়", "গোল", "উইকেট", "রান", "ম্যাচ", "অধিনায়ক", "স্টেডিয়াম",
     "টুর্নামেন্ট", "কোচ", "দলনেতা", "বিশ্বকাপ", "সেঞ্চুরি", "লিগ"},
    {"পর্যটক", "সৈকত", "পাহাড়", "হোটেল", "ভ্রমণ", "দর্শনীয়", "অরণ্য", "জলপ্রপাত", "দ্বীপ",
     "ট্রেন", "যাত্রী", "বনভোজন", "রিসর্ট", "নৌকা", "অভয়ারণ্য"},
}};

constexpr std::array<std::string_view, 12> kShared = {
    "মানুষ", "দেশ", "শহর", "বছর", "দিন", "খবর", "নতুন", "বড়", "সবাই", "আজ", "গতকাল", "অনেক"};

constexpr std::array<std::string_view, 6> kClosed = {"এবং", "ও", "জন্য", "সাথে", "নিয়ে", "থেকে"};

constexpr std::array<std::string_view, 5> kRoots = {"কর", "বল", "দেখ", "শুন", "লিখ"};

constexpr std::array<std::string_view, 8> kVerbSuffixes = {"েছে", "েছেন", "ছে", "লেন",
                                                           "ল", "বে", "েন", "তেন"};

template <class T, std::size_t N>
std::string_view pick(Rng& rng, const std::array<T, N>& pool) {
  return pool[static_cast<std::size_t>(rng.below(N))];
}

}  // namespace

std::vector<CorpusRecord> generate_synthetic_corpus(const SyntheticOptions& options) {
  if (options.sentences_per_category == 0 || options.keywords_per_sentence == 0) {
    throw Error(ErrorCode::kUsage, "synthetic corpus needs at least one sentence and one keyword");
  }
  if (!(options.noise >= 0.0 && options.noise <= 1.0)) {
    throw Error(ErrorCode::kUsage, "synthetic noise must lie in [0, 1]");
  }
  const auto categories = default_top_categories();
  Rng rng(options.seed);
  std::vector<CorpusRecord> out;
  out.reserve(categories.size() * options.sentences_per_category);
  for (std::size_t c = 0; c < categories.size(); ++c) {
    for (std::size_t s = 0; s < options.sentences_per_category; ++s) {
      std::string text;
      for (std::size_t w = 0; w < options.keywords_per_sentence; ++w) {
        const bool noisy = rng.unit() < options.noise;
        text += noisy ? pick(rng, kShared) : pick(rng, kKeywords[c]);
        text += ' ';
        if (w == 1 && rng.below(2) == 0) {
          text += pick(rng, kClosed);
          text += ' ';
        }
      }
      text += pick(rng, kRoots);
      text += pick(rng, kVerbSuffixes);
      text += "।";
      char id[32];
      std::snprintf(id, sizeof id, "syn-%zu-%04zu", c, s);
      out.push_back({id, {std::string(categories[c])}, std::move(text)});
    }
  }
  return out;
}

}  // namespace semsearch
