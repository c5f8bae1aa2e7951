#include "semsearch/model.hpp"

#include <sstream>

#include <cereal/archives/portable_binary.hpp>
#include <cereal/types/string.hpp>
#include <cereal/types/vector.hpp>

#include "io_util.hpp"
#include "semsearch/error.hpp"

namespace semsearch {

namespace detail {

struct ModelCodec {
  template <class Ar, class T, class F>
  static void seq(Ar& ar, std::vector<T>& items, F&& each) {
    std::uint64_t n = items.size();
    ar(n);
    if constexpr (Ar::is_loading::value) {
      if (n > (1u << 28)) throw Error(ErrorCode::kIo, "implausible element count");
      items.resize(n);
    }
    for (auto& item : items) each(item);
  }

  template <class Ar>
  static void io(Ar& ar, FeatureSchema& s) {
    std::uint64_t terms = s.num_terms;
    std::uint64_t dense = s.dense_size;
    ar(s.version, terms, dense);
    s.num_terms = terms;
    s.dense_size = dense;
  }

  template <class Ar>
  static void io(Ar& ar, NaiveBayesModel& m) {
    ar(m.categories_);
    io(ar, m.schema_);
    ar(m.options_.alpha, m.log_prior_, m.log_likelihood_, m.bin_edges_, m.log_bin_likelihood_);
  }

  template <class Ar>
  static void io(Ar& ar, SvmModel& m) {
    ar(m.categories_);
    io(ar, m.schema_);
    ar(m.options_.C, m.options_.tol, m.options_.max_passes, m.dense_min_, m.dense_range_);
    seq(ar, m.machines_, [&](SvmModel::BinaryMachine& bm) {
      std::uint64_t pos = bm.positive;
      std::uint64_t neg = bm.negative;
      std::vector<std::uint64_t> rows(bm.examples.begin(), bm.examples.end());
      ar(pos, neg, bm.weights, bm.bias, rows, bm.alphas);
      bm.positive = pos;
      bm.negative = neg;
      bm.examples.assign(rows.begin(), rows.end());
    });
  }

  template <class Ar>
  static void io(Ar& ar, TreeModel& m) {
    ar(m.categories_);
    io(ar, m.schema_);
    std::uint64_t min_leaf = m.options_.min_leaf;
    ar(min_leaf, m.options_.confidence, m.options_.prune);
    m.options_.min_leaf = min_leaf;
    seq(ar, m.nodes_, [&](TreeModel::Node& node) {
      auto kind = static_cast<std::uint8_t>(node.split.kind);
      std::uint64_t feature = node.split.feature;
      ar(node.leaf, kind, feature, node.split.threshold, node.split.gain, node.split.gain_ratio,
         node.left, node.right, node.counts);
      node.split.kind = static_cast<SplitKind>(kind);
      node.split.feature = feature;
    });
  }

  template <class Ar>
  static void io(Ar& ar, MlpModel& m) {
    ar(m.categories_);
    io(ar, m.schema_);
    auto& o = m.options_;
    std::uint64_t hidden = o.hidden;
    std::uint64_t top_k = o.top_k;
    ar(hidden, o.lr, o.momentum, o.epochs, top_k, o.seed);
    o.hidden = hidden;
    o.top_k = top_k;
    ar(m.selected_terms_, m.dense_min_, m.dense_range_);
    auto& p = m.params_;
    std::uint64_t dims[3] = {p.inputs, p.hidden, p.outputs};
    ar(dims[0], dims[1], dims[2], p.weights);
    p.inputs = dims[0];
    p.hidden = dims[1];
    p.outputs = dims[2];
  }

  // Structural checks after loading so a corrupt but checksum-valid file
  // cannot index out of range at prediction time.
  static void check(const Model& model, const std::string& source) {
    auto fail = [&](const std::string& what) {
      throw Error(ErrorCode::kIo, source + ": inconsistent model (" + what + ")");
    };
    const std::size_t k = categories_of(model).size();
    const FeatureSchema& s = schema_of(model);
    if (k == 0) fail("no categories");
    std::visit(
        [&](const auto& m) {
          using T = std::decay_t<decltype(m)>;
          if constexpr (std::is_same_v<T, NaiveBayesModel>) {
            if (m.log_prior_.size() != k || m.log_likelihood_.size() != k * s.num_terms ||
                m.bin_edges_.size() != s.dense_size * (NaiveBayesModel::kBins - 1) ||
                m.log_bin_likelihood_.size() != k * s.dense_size * NaiveBayesModel::kBins) {
              fail("naive Bayes table sizes");
            }
          } else if constexpr (std::is_same_v<T, SvmModel>) {
            if (m.machines_.size() != k * (k - 1) / 2 || m.dense_min_.size() != s.dense_size ||
                m.dense_range_.size() != s.dense_size) {
              fail("SVM machine count");
            }
            for (const auto& bm : m.machines_) {
              if (bm.positive >= k || bm.negative >= k ||
                  bm.weights.size() != s.num_terms + s.dense_size) {
                fail("SVM machine shape");
              }
            }
          } else if constexpr (std::is_same_v<T, TreeModel>) {
            const auto n = static_cast<std::int32_t>(m.nodes_.size());
            if (n == 0) fail("empty tree");
            for (std::int32_t i = 0; i < n; ++i) {
              const auto& node = m.nodes_[static_cast<std::size_t>(i)];
              if (node.counts.size() != k) fail("leaf distribution size");
              if (!node.leaf && (node.left <= i || node.right <= i || node.left >= n ||
                                 node.right >= n)) {
                fail("child index");
              }
              if (!node.leaf) {
                const std::size_t limit = node.split.kind == SplitKind::kTermPresence
                                              ? s.num_terms
                                              : s.dense_size;
                if (node.split.feature >= limit) fail("split feature");
              }
            }
          } else {
            const auto& p = m.params_;
            if (p.outputs != k || p.inputs != m.selected_terms_.size() + s.dense_size ||
                p.weights.size() != p.size() || m.dense_min_.size() != s.dense_size ||
                m.dense_range_.size() != s.dense_size) {
              fail("MLP layer sizes");
            }
            for (TermId t : m.selected_terms_) {
              if (t >= s.num_terms) fail("MLP selected term");
            }
          }
        },
        model);
  }
};

}  // namespace detail

Model train_model(ClassifierKind kind, const Dataset& data, const ClassifierOptions& options) {
  switch (kind) {
    case ClassifierKind::kNaiveBayes: return train_naive_bayes(data, options.nb);
    case ClassifierKind::kSvm: return train_svm_smo(data, options.svm);
    case ClassifierKind::kTree: return train_decision_tree(data, options.tree);
    case ClassifierKind::kMlp: return train_mlp(data, options.mlp);
  }
  throw Error(ErrorCode::kInvariant, "unknown classifier kind");
}

ClassifierKind kind_of(const Model& model) noexcept {
  return kAllClassifierKinds[model.index()];
}

CategoryDistribution predict_proba(const Model& model, const FeatureVector& fv) {
  return std::visit([&](const auto& m) { return m.predict_proba(fv); }, model);
}

CategoryIndex predict(const Model& model, const FeatureVector& fv) {
  return predict_proba(model, fv).argmax();
}

const std::vector<std::string>& categories_of(const Model& model) noexcept {
  return std::visit([](const auto& m) -> const std::vector<std::string>& { return m.categories(); },
                    model);
}

const FeatureSchema& schema_of(const Model& model) noexcept {
  return std::visit([](const auto& m) -> const FeatureSchema& { return m.schema(); }, model);
}

std::string serialize_model(const Model& model) {
  std::ostringstream out;
  {
    cereal::PortableBinaryOutputArchive ar(out);
    auto kind = static_cast<std::uint8_t>(model.index());
    ar(kind);
    // The codec is symmetric and takes mutable references, so save a copy.
    Model copy = model;
    std::visit([&](auto& m) { detail::ModelCodec::io(ar, m); }, copy);
  }
  return detail::frame(kModelFormatVersion, out.str());
}

namespace {

template <class T>
Model read_as(cereal::PortableBinaryInputArchive& ar) {
  T m;
  detail::ModelCodec::io(ar, m);
  return m;
}

}  // namespace

Model deserialize_model(std::string_view bytes, const std::string& source) {
  const std::string_view payload = detail::unframe(bytes, kModelFormatVersion, source);
  std::istringstream in{std::string(payload)};
  Model model;
  try {
    cereal::PortableBinaryInputArchive ar(in);
    std::uint8_t kind = 0;
    ar(kind);
    switch (kind) {
      case 0: model = read_as<NaiveBayesModel>(ar); break;
      case 1: model = read_as<SvmModel>(ar); break;
      case 2: model = read_as<TreeModel>(ar); break;
      case 3: model = read_as<MlpModel>(ar); break;
      default: throw Error(ErrorCode::kIo, source + ": unknown classifier kind " + std::to_string(kind));
    }
  } catch (const cereal::Exception& e) {
    throw Error(ErrorCode::kIo, source + ": truncated model (" + e.what() + ")");
  }
  if (schema_of(model).version != kFeatureSchemaVersion) {
    throw Error(ErrorCode::kSchema, source + ": model uses feature schema " +
                                        schema_of(model).version + ", this build produces " +
                                        std::string(kFeatureSchemaVersion));
  }
  detail::ModelCodec::check(model, source);
  return model;
}

void save_model(const Model& model, const std::filesystem::path& path) {
  detail::write_file(path, serialize_model(model));
}

Model load_model(const std::filesystem::path& path) {
  return deserialize_model(detail::read_file(path), path.string());
}

}  // namespace semsearch
