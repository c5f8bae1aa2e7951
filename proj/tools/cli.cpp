#include "cli.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <set>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "semsearch/config.hpp"
#include "semsearch/engine.hpp"
#include "semsearch/error.hpp"
#include "semsearch/experiment.hpp"
#include "semsearch/persistence.hpp"
#include "semsearch/synthetic.hpp"

namespace semsearch::cli {

namespace {

namespace fs = std::filesystem;
using ordered_json = nlohmann::ordered_json;

std::string fixed(double v, int digits = 6) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

std::string display_key(const std::string& key) { return key.empty() ? "<root>" : key; }

// Flags shared by every command that reads a configuration.
struct CommonFlags {
  std::string config;

  void add(CLI::App* app) {
    app->add_option("-c,--config", config, "INI configuration file")->check(CLI::ExistingFile);
  }

  EngineConfig load() const { return config.empty() ? EngineConfig{} : load_config(config); }
};

struct ResourceFlags {
  std::string suffixes;
  std::string function_words;
  std::string synonyms;
  std::string kb;

  void add(CLI::App* app) {
    app->add_option("--suffixes", suffixes, "suffix table TSV")->check(CLI::ExistingFile);
    app->add_option("--function-words", function_words, "function-word list")
        ->check(CLI::ExistingFile);
    app->add_option("--synonyms", synonyms, "synonym lexicon TSV")->check(CLI::ExistingFile);
    app->add_option("--kb", kb, "knowledge base TSV")->check(CLI::ExistingFile);
  }

  void apply(ResourcePaths& paths) const {
    if (!suffixes.empty()) paths.suffixes = suffixes;
    if (!function_words.empty()) paths.function_words = function_words;
    if (!synonyms.empty()) paths.synonyms = synonyms;
    if (!kb.empty()) paths.kb = kb;
  }
};

struct ClassifierFlags {
  std::optional<double> nb_alpha;
  std::optional<double> svm_c;
  std::optional<std::size_t> tree_min_leaf;
  bool no_prune = false;
  std::optional<int> mlp_epochs;
  std::optional<std::size_t> mlp_hidden;
  std::optional<std::size_t> mlp_top_k;
  std::optional<std::uint64_t> mlp_seed;

  void add(CLI::App* app) {
    app->add_option("--nb-alpha", nb_alpha, "Naive Bayes Laplace smoothing");
    app->add_option("--svm-c", svm_c, "SVM box constraint");
    app->add_option("--tree-min-leaf", tree_min_leaf, "minimum examples per tree leaf");
    app->add_flag("--no-prune", no_prune, "keep the unpruned tree");
    app->add_option("--mlp-epochs", mlp_epochs, "MLP training epochs");
    app->add_option("--mlp-hidden", mlp_hidden, "MLP hidden units (0 = automatic)");
    app->add_option("--mlp-top-k", mlp_top_k, "terms fed to the MLP");
    app->add_option("--mlp-seed", mlp_seed, "MLP initialisation and shuffling seed");
  }

  void apply(ClassifierOptions& o) const {
    if (nb_alpha) o.nb.alpha = *nb_alpha;
    if (svm_c) o.svm.C = *svm_c;
    if (tree_min_leaf) o.tree.min_leaf = *tree_min_leaf;
    if (no_prune) o.tree.prune = false;
    if (mlp_epochs) o.mlp.epochs = *mlp_epochs;
    if (mlp_hidden) o.mlp.hidden = *mlp_hidden;
    if (mlp_top_k) o.mlp.top_k = *mlp_top_k;
    if (mlp_seed) o.mlp.seed = *mlp_seed;
  }
};

struct QueryFlags {
  bool trace = false;
  bool json = false;
  std::optional<std::size_t> top_n;
  std::optional<double> threshold;

  void add(CLI::App* app) {
    app->add_flag("--trace", trace, "print the full audit trail");
    app->add_flag("--json", json, "print JSON");
    app->add_option("-n,--top-n", top_n, "hits to retrieve");
    app->add_option("--threshold", threshold, "minimum score for composed answers");
  }

  void apply(EngineOptions& o) const {
    if (top_n) o.top_n = *top_n;
    if (threshold) o.answer.threshold = *threshold;
  }
};

fs::path state_dir(const std::string& flag, const EngineConfig& cfg) {
  if (!flag.empty()) return flag;
  if (cfg.state_dir) return *cfg.state_dir;
  throw Error(ErrorCode::kUsage, "no state directory (pass -s or set paths.state)");
}

// Names of a decision node's children, for printing votes.
std::vector<std::string> child_names_at(const Engine& engine, const CategoryPath& node) {
  const auto id = engine.tree().find(node);
  return id ? engine.tree().child_names(*id) : std::vector<std::string>{};
}

std::string prediction_name(const Prediction& p, const std::vector<std::string>& names) {
  if (!p.category) return "NULL";
  return *p.category < names.size() ? names[*p.category] : std::to_string(*p.category);
}

std::string leaf_of_hit(const Engine& engine, const Hit& hit) {
  return path_key(engine.records().at(hit.doc).category_path);
}

void print_answer_text(const Engine& engine, const std::string& raw, const Answer& a, bool trace,
                       std::ostream& out) {
  if (!trace) {
    out << a.text << "\n";
    if (!a.supporting_ids.empty()) {
      out << "sources:";
      for (const auto& id : a.supporting_ids) out << ' ' << id;
      out << "\n";
    }
    return;
  }
  const auto& t = a.trace;
  out << "query: " << raw << "\n";
  out << "normalized: " << t.normalized_query << "\n";
  out << "sentence type: " << to_string(t.sentence_type) << "\n";
  if (t.expansions.empty()) out << "expansions: none\n";
  for (const auto& e : t.expansions) {
    out << "expansion: token " << e.token_index << " " << e.original << " -> " << e.replacement
        << "\n";
  }
  for (const auto& step : t.votes) {
    const auto names = child_names_at(engine, step.node);
    out << "vote " << display_key(path_key(step.node)) << ":";
    for (const auto& p : step.predictions) {
      out << ' ' << to_string(p.source) << '=' << prediction_name(p, names);
    }
    out << " -> ";
    if (step.outcome.all_null) {
      out << "all NULL";
    } else {
      for (std::size_t i = 0; i < step.outcome.winners.size(); ++i) {
        out << (i ? "," : "") << names.at(step.outcome.winners[i]);
      }
    }
    out << " [" << to_string(step.outcome.rule) << "]";
    for (const auto& [c, w] : step.outcome.weights) out << ' ' << names.at(c) << '=' << fixed(w, 2);
    out << " null=" << fixed(step.outcome.null_weight, 2) << "\n";
  }
  for (const auto& p : t.routed_paths) out << "routed: " << display_key(path_key(p)) << "\n";
  if (t.hits.empty()) out << "hits: none\n";
  std::set<std::string> leaves;
  for (std::size_t i = 0; i < t.hits.size(); ++i) {
    const auto& h = t.hits[i];
    const std::string leaf = leaf_of_hit(engine, h);
    leaves.insert(leaf);
    out << "hit " << (i + 1) << ": " << fixed(h.score) << ' ' << h.id << " [" << display_key(leaf)
        << "] " << engine.records().at(h.doc).raw_text << "\n";
  }
  out << "leaves:";
  for (const auto& l : leaves) out << ' ' << display_key(l);
  out << "\n";
  if (t.kb_row) {
    out << "kb: " << t.kb_row->subject << " | " << t.kb_row->relation << " | " << t.kb_row->object
        << " | " << t.kb_row->sentence_id << "\n";
  } else {
    out << "kb: none\n";
  }
  out << "answer: " << a.text << "\n";
  out << "supporting:";
  for (const auto& id : a.supporting_ids) out << ' ' << id;
  out << "\n";
}

ordered_json answer_json(const Engine& engine, const std::string& raw, const Answer& a) {
  const auto& t = a.trace;
  ordered_json j;
  j["query"] = raw;
  j["normalized"] = t.normalized_query;
  j["sentence_type"] = std::string(to_string(t.sentence_type));
  j["found"] = a.found;
  j["answer"] = a.text;
  j["supporting_ids"] = a.supporting_ids;
  ordered_json expansions = ordered_json::array();
  for (const auto& e : t.expansions) {
    expansions.push_back({{"token", e.token_index}, {"original", e.original}, {"replacement", e.replacement}});
  }
  j["expansions"] = expansions;
  ordered_json votes = ordered_json::array();
  for (const auto& step : t.votes) {
    const auto names = child_names_at(engine, step.node);
    ordered_json v;
    v["node"] = path_key(step.node);
    ordered_json preds;
    for (const auto& p : step.predictions) {
      preds[std::string(to_string(p.source))] =
          p.category ? ordered_json(names.at(*p.category)) : ordered_json(nullptr);
    }
    v["predictions"] = preds;
    ordered_json winners = ordered_json::array();
    for (auto w : step.outcome.winners) winners.push_back(names.at(w));
    v["winners"] = winners;
    v["rule"] = std::string(to_string(step.outcome.rule));
    ordered_json weights;
    for (const auto& [c, w] : step.outcome.weights) weights[names.at(c)] = w;
    v["weights"] = weights;
    v["null_weight"] = step.outcome.null_weight;
    votes.push_back(v);
  }
  j["votes"] = votes;
  ordered_json routed = ordered_json::array();
  for (const auto& p : t.routed_paths) routed.push_back(path_key(p));
  j["routed_paths"] = routed;
  ordered_json hits = ordered_json::array();
  for (const auto& h : t.hits) {
    hits.push_back({{"id", h.id}, {"score", h.score}, {"leaf", leaf_of_hit(engine, h)},
                    {"text", engine.records().at(h.doc).raw_text}});
  }
  j["hits"] = hits;
  if (t.kb_row) {
    j["kb_row"] = {{"subject", t.kb_row->subject}, {"relation", t.kb_row->relation},
                   {"object", t.kb_row->object}, {"sentence_id", t.kb_row->sentence_id}};
  } else {
    j["kb_row"] = nullptr;
  }
  return j;
}

void answer_one(const Engine& engine, const std::string& text, const EngineOptions& options,
                const QueryFlags& flags, std::ostream& out) {
  const Answer a = engine.query(text, options);
  if (flags.json) {
    out << answer_json(engine, text, a).dump(2) << "\n";
  } else {
    print_answer_text(engine, text, a, flags.trace, out);
  }
}

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::kUsage:
      return kExitUsage;
    case ErrorCode::kInvariant:
      return kExitInvariant;
    default:
      return kExitData;
  }
}

}  // namespace

int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out,
        std::ostream& err) {
  CLI::App app{"Semantic search and question answering over a categorized Bengali repository",
               args.empty() ? "semsearch" : fs::path(args[0]).filename().string()};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "show help for every subcommand");

  CommonFlags common;
  ResourceFlags resources;
  ClassifierFlags classifiers;
  QueryFlags query_flags;
  std::string state;

  auto* ingest = app.add_subcommand("ingest", "build a state directory from a corpus");
  std::string corpus_path;
  std::string ingest_out;
  ingest->add_option("corpus", corpus_path, "JSONL file or category directory tree");
  ingest->add_option("-o,--out", ingest_out, "state directory to write");
  common.add(ingest);
  resources.add(ingest);

  auto* train = app.add_subcommand("train", "train the four classifiers at every decision node");
  train->add_option("-s,--state", state, "state directory");
  common.add(train);
  classifiers.add(train);

  auto* eval = app.add_subcommand("eval", "evaluate a classifier at one taxonomy node");
  std::optional<std::size_t> kfold;
  std::optional<double> split_pct;
  bool training_set = false;
  bool no_shuffle = false;
  std::optional<std::uint64_t> eval_seed;
  std::string classifier_name = "ensemble";
  std::string node_key;
  bool eval_json = false;
  std::string predictions_path;
  eval->add_option("-s,--state", state, "state directory");
  auto* kfold_opt = eval->add_option("--kfold", kfold, "k-fold cross-validation");
  auto* split_opt = eval->add_option("--split", split_pct, "percentage split, train share");
  auto* train_opt = eval->add_flag("--training-set", training_set, "evaluate on the training data");
  kfold_opt->excludes(split_opt)->excludes(train_opt);
  split_opt->excludes(train_opt);
  eval->add_flag("--no-shuffle", no_shuffle, "keep corpus order for --split");
  eval->add_option("--seed", eval_seed, "fold and split seed");
  eval->add_option("--classifier", classifier_name, "nb, svm, tree, mlp or ensemble");
  eval->add_option("--node", node_key, "taxonomy node as a/b (default: the root)");
  eval->add_flag("--json", eval_json, "print JSON");
  eval->add_option("--predictions", predictions_path, "write per-instance predictions as JSONL");
  common.add(eval);
  classifiers.add(eval);

  auto* query = app.add_subcommand("query", "answer one question");
  std::string query_text;
  query->add_option("-s,--state", state, "state directory");
  query->add_option("text", query_text, "the question")->required();
  common.add(query);
  query_flags.add(query);

  auto* repl = app.add_subcommand("repl", "answer questions read line by line");
  repl->add_option("-s,--state", state, "state directory");
  common.add(repl);
  query_flags.add(repl);

  auto* stem = app.add_subcommand("stem", "extract the root verb of a word");
  std::string stem_word;
  stem->add_option("word", stem_word, "inflected word")->required();
  stem->add_option("--suffixes", resources.suffixes, "suffix table TSV")->check(CLI::ExistingFile);

  auto* synth = app.add_subcommand("synth", "write a generated seven-category corpus as JSONL");
  SyntheticOptions synth_opts;
  std::string synth_out;
  synth->add_option("-o,--out", synth_out, "output file (default: standard output)");
  synth->add_option("--per-category", synth_opts.sentences_per_category, "sentences per category");
  synth->add_option("--keywords", synth_opts.keywords_per_sentence, "keywords per sentence");
  synth->add_option("--noise", synth_opts.noise, "shared-vocabulary noise rate");
  synth->add_option("--seed", synth_opts.seed, "generator seed");

  auto* config_cmd = app.add_subcommand("config", "print the default configuration");

  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  if (argv.empty()) argv.push_back("semsearch");
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error[usage]: " << e.what() << "\n";
    const CLI::App* sub = app.get_subcommands().empty() ? &app : app.get_subcommands().front();
    err << sub->help();
    return kExitUsage;
  }

  try {
    if (ingest->parsed()) {
      EngineConfig cfg = common.load();
      resources.apply(cfg.resources);
      fs::path source = corpus_path;
      if (source.empty()) {
        if (!cfg.corpus) throw Error(ErrorCode::kUsage, "no corpus given (argument or paths.corpus)");
        source = *cfg.corpus;
      }
      const fs::path dir = state_dir(ingest_out, cfg);
      Engine engine = Engine::build(read_corpus(source), load_resources(cfg.resources));
      save_state(engine, dir);
      out << "ingested " << engine.records().size() << " sentences, " << engine.vocabulary().size()
          << " terms, " << engine.tree().decision_nodes().size() << " decision nodes into "
          << dir.string() << "\n";
    } else if (train->parsed()) {
      EngineConfig cfg = common.load();
      classifiers.apply(cfg.engine.classifiers);
      cfg.validate();
      const fs::path dir = state_dir(state, cfg);
      Engine engine = load_state(dir);
      engine.train(cfg.engine.classifiers, [&](const std::string& key, std::size_t n) {
        err << "training " << display_key(key) << " on " << n << " sentences\n";
      });
      save_state(engine, dir);
      out << "trained " << engine.models().size() << " decision nodes x 4 classifiers\n";
    } else if (eval->parsed()) {
      EngineConfig cfg = common.load();
      classifiers.apply(cfg.engine.classifiers);
      if (kfold) cfg.eval.k = *kfold;
      if (split_pct) cfg.eval.pct = *split_pct;
      if (eval_seed) cfg.eval.seed = *eval_seed;
      cfg.validate();
      const Engine engine = load_state(state_dir(state, cfg));
      const EvalSubject subject = parse_eval_subject(classifier_name);
      std::vector<std::string> ids;
      const Dataset data = engine.dataset_for(node_key, &ids);
      const TrainFn train_fn = make_train_fn(subject, cfg.engine.classifiers, cfg.engine.ensemble);

      ordered_json j;
      j["classifier"] = std::string(to_string(subject));
      j["node"] = node_key;
      std::vector<InstancePrediction> predictions;
      EvalReport report;
      std::vector<EvalReport> folds;
      std::string mode;
      if (split_pct || training_set) {
        const Split split = training_set
                                ? resubstitution_split(data.examples.size())
                                : percentage_split(data.examples.size(), cfg.eval.pct,
                                                   cfg.eval.seed, !no_shuffle);
        report = evaluate_split(train_fn, data, split, &predictions);
        if (training_set) {
          mode = "training set";
          j["mode"] = "training-set";
        } else {
          mode = "split " + fixed(cfg.eval.pct, 1) + "% (" +
                 (no_shuffle ? std::string("unshuffled") : "seed " + std::to_string(cfg.eval.seed)) +
                 ")";
          j["mode"] = "split";
          j["pct"] = cfg.eval.pct;
          j["shuffle"] = !no_shuffle;
          j["seed"] = cfg.eval.seed;
        }
        j["train_size"] = split.train.size();
        j["test_size"] = split.test.size();
        if (!eval_json) {
          out << "classifier: " << to_string(subject) << "\n"
              << "node: " << display_key(node_key) << "\n"
              << "mode: " << mode << "\n"
              << "train instances: " << split.train.size() << "\n"
              << "test instances: " << split.test.size() << "\n\n";
        }
      } else {
        CrossValidation cv = cross_validate(train_fn, data, cfg.eval.k, cfg.eval.seed);
        report = cv.average;
        folds = std::move(cv.folds);
        predictions = std::move(cv.predictions);
        j["mode"] = "kfold";
        j["k"] = cfg.eval.k;
        j["seed"] = cv.seed_used;
        if (!eval_json) {
          out << "classifier: " << to_string(subject) << "\n"
              << "node: " << display_key(node_key) << "\n"
              << "mode: " << cfg.eval.k << "-fold cross-validation (seed " << cv.seed_used
              << ")\n"
              << "instances: " << data.examples.size() << "\n\n";
        }
      }
      if (!predictions_path.empty()) {
        std::ofstream file(predictions_path, std::ios::binary);
        file << predictions_to_jsonl(predictions, data, ids);
        if (!file) throw Error(ErrorCode::kIo, "cannot write " + predictions_path);
      }
      if (eval_json) {
        j["categories"] = data.categories;
        j["report"] = ordered_json::parse(to_json(report));
        if (!folds.empty()) {
          ordered_json per = ordered_json::array();
          for (const auto& f : folds) per.push_back(ordered_json::parse(to_json(f)));
          j["folds"] = per;
        }
        out << j.dump(2) << "\n";
      } else {
        out << to_text(report);
      }
    } else if (query->parsed()) {
      EngineConfig cfg = common.load();
      query_flags.apply(cfg.engine);
      cfg.validate();
      const Engine engine = load_state(state_dir(state, cfg));
      answer_one(engine, query_text, cfg.engine, query_flags, out);
    } else if (repl->parsed()) {
      EngineConfig cfg = common.load();
      query_flags.apply(cfg.engine);
      cfg.validate();
      const Engine engine = load_state(state_dir(state, cfg));
      out << "type a question, :trace to toggle the audit trail, :quit to leave\n";
      std::string line;
      while (out << "> " << std::flush, std::getline(in, line)) {
        if (line == ":quit" || line == ":q") break;
        if (line == ":trace") {
          query_flags.trace = !query_flags.trace;
          out << "trace " << (query_flags.trace ? "on" : "off") << "\n";
          continue;
        }
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        try {
          answer_one(engine, line, cfg.engine, query_flags, out);
        } catch (const Error& e) {
          err << "error[" << error_code_name(e.code()) << "]: " << e.what() << "\n";
        }
      }
      out << "\n";
    } else if (stem->parsed()) {
      ResourcePaths paths;
      if (!resources.suffixes.empty()) paths.suffixes = resources.suffixes;
      const LanguageResources res = load_resources(paths);
      const std::string word = normalize(stem_word);
      const auto analysis = extract_root_verb(word, res.suffixes);
      out << "word: " << word << "\n";
      if (!analysis) {
        out << "no table suffix matches; not a verb\n";
      } else {
        out << "root: " << analysis->root << "\n"
            << "suffix: " << analysis->suffix << "\n"
            << "tense: " << to_string(analysis->tense) << "\n"
            << "person: " << (analysis->person ? to_string(*analysis->person) : "-") << "\n";
      }
    } else if (synth->parsed()) {
      const std::string jsonl = to_jsonl(generate_synthetic_corpus(synth_opts));
      if (synth_out.empty()) {
        out << jsonl;
      } else {
        std::ofstream file(synth_out, std::ios::binary);
        file << jsonl;
        if (!file) throw Error(ErrorCode::kIo, "cannot write " + synth_out);
      }
    } else if (config_cmd->parsed()) {
      out << default_config_text();
    }
  } catch (const Error& e) {
    err << "error[" << error_code_name(e.code()) << "]: " << e.what() << "\n";
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    err << "error[" << error_code_name(ErrorCode::kInvariant) << "]: " << e.what() << "\n";
    return kExitInvariant;
  }
  return kExitOk;
}

}  // namespace semsearch::cli
