#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "semsearch/features.hpp"

namespace semsearch {

using CategoryIndex = std::size_t;

struct LabeledExample {
  FeatureVector features;
  CategoryIndex category = 0;
};

/// Training data for one taxonomy node: categories are the node's children
/// in order; example labels index into `categories`.
struct Dataset {
  std::vector<std::string> categories;
  std::size_t num_terms = 0;   // sparse id space
  std::size_t dense_size = 0;  // length of every dense block
  std::vector<LabeledExample> examples;

  /// Checks labels, id ranges, dense lengths and finiteness.
  /// Throws Error(kData) naming the offending example.
  void validate() const;
  std::vector<std::size_t> category_counts() const;
  /// Copy restricted to `indices`, categories unchanged.
  Dataset subset(std::span<const std::size_t> indices) const;
};

/// Per-category probabilities in training category order.
struct CategoryDistribution {
  std::vector<double> probabilities;

  std::size_t size() const noexcept { return probabilities.size(); }
  double operator[](std::size_t i) const { return probabilities[i]; }
  /// Index of the largest entry; ties go to the lowest index.
  CategoryIndex argmax() const noexcept;
  double max() const noexcept;

  friend bool operator==(const CategoryDistribution&, const CategoryDistribution&) = default;
};

enum class ClassifierKind { kNaiveBayes, kSvm, kTree, kMlp };
inline constexpr std::size_t kClassifierKindCount = 4;
inline constexpr ClassifierKind kAllClassifierKinds[] = {
    ClassifierKind::kNaiveBayes, ClassifierKind::kSvm, ClassifierKind::kTree,
    ClassifierKind::kMlp};

/// Short names used on the command line and in model file names:
/// nb, svm, tree, mlp.
std::string_view to_string(ClassifierKind kind) noexcept;
std::optional<ClassifierKind> parse_classifier_kind(std::string_view name) noexcept;

/// Schema facts every model records so predict_proba can reject vectors
/// from a different feature layout.
struct FeatureSchema {
  std::string version{kFeatureSchemaVersion};
  std::size_t num_terms = 0;
  std::size_t dense_size = 0;

  /// Throws Error(kSchema) when `fv` does not fit this schema.
  void check(const FeatureVector& fv) const;

  friend bool operator==(const FeatureSchema&, const FeatureSchema&) = default;
};

/// Softmax of scores, computed from the max-shifted exponentials.
CategoryDistribution softmax(std::span<const double> scores);

}  // namespace semsearch
