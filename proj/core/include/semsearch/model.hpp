#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <variant>

#include "semsearch/decision_tree.hpp"
#include "semsearch/mlp.hpp"
#include "semsearch/naive_bayes.hpp"
#include "semsearch/svm.hpp"

namespace semsearch {

using Model = std::variant<NaiveBayesModel, SvmModel, TreeModel, MlpModel>;

/// Hyperparameters for all four classifiers; each trainer reads its own block.
struct ClassifierOptions {
  NaiveBayesOptions nb;
  SvmOptions svm;
  TreeOptions tree;
  MlpOptions mlp;
};

inline constexpr std::uint32_t kModelFormatVersion = 1;

Model train_model(ClassifierKind kind, const Dataset& data, const ClassifierOptions& options = {});

ClassifierKind kind_of(const Model& model) noexcept;
CategoryDistribution predict_proba(const Model& model, const FeatureVector& fv);
/// argmax of predict_proba, lowest index on ties.
CategoryIndex predict(const Model& model, const FeatureVector& fv);
const std::vector<std::string>& categories_of(const Model& model) noexcept;
const FeatureSchema& schema_of(const Model& model) noexcept;

/// Self-describing byte image: version header, checksum, kind,
/// hyperparameters, schema and parameters. Loading reproduces
/// bit-identical predictions.
std::string serialize_model(const Model& model);
/// `source` names the file or node in error messages.
Model deserialize_model(std::string_view bytes, const std::string& source);

void save_model(const Model& model, const std::filesystem::path& path);
Model load_model(const std::filesystem::path& path);

}  // namespace semsearch
