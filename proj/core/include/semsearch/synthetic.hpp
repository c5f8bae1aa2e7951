#pragma once

#include <cstdint>
#include <vector>

#include "semsearch/corpus.hpp"

namespace semsearch {

struct SyntheticOptions {
  std::size_t sentences_per_category = 100;
  std::size_t keywords_per_sentence = 5;
  double noise = 0.10;  // chance that a keyword slot draws from the shared pool
  std::uint64_t seed = 7;
};

/// Sentences for the seven default top-level categories. Each sentence is
/// a run of keywords drawn from its category's pool (or, with probability
/// `noise`, from a pool shared by all categories), an optional closed-class
/// word, and an inflected verb, ending in a danda. Ids are
/// `syn-<category index>-<sentence index>`, zero padded.
std::vector<CorpusRecord> generate_synthetic_corpus(const SyntheticOptions& options = {});

}  // namespace semsearch
