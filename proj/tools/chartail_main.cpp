// Copyright 2026 The chartail Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// chartail: synthesis, distribution stats, char-F1 evaluation, confidence
// ensembling, logit-adjustment baselines, and the two-expert simulator,
// all emitting deterministic plot-ready CSV.

#include <algorithm>
#include <cstdint>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "chartail/adjust.hpp"
#include "chartail/alignment.hpp"
#include "chartail/charset.hpp"
#include "chartail/ensemble.hpp"
#include "chartail/error.hpp"
#include "chartail/experiment.hpp"
#include "chartail/io.hpp"
#include "chartail/metrics.hpp"
#include "chartail/recognizer.hpp"
#include "chartail/synth.hpp"

namespace {

using namespace chartail;

// Charset inference for convenience paths: every non-delimiter scalar of
// the text, in code-point order.
Charset infer_charset_from_text(const std::string& text) {
  const std::u32string decoded = decode_utf8(text);
  std::set<char32_t> seen;
  for (char32_t c : decoded) {
    if (!detail::is_token_delimiter(c) && !is_special_symbol(c)) seen.insert(c);
  }
  require(!seen.empty(), "cannot infer a charset from the corpus");
  return Charset(std::vector<char32_t>(seen.begin(), seen.end()));
}

Charset infer_charset_from_words(std::span<const DatasetRecord> records) {
  std::set<char32_t> seen;
  for (const DatasetRecord& r : records) {
    for (char32_t c : r.word) seen.insert(c);
  }
  require(!seen.empty(), "cannot infer a charset from the dataset");
  return Charset(std::vector<char32_t>(seen.begin(), seen.end()));
}

// Strict id pairing shared by eval and ensemble: ids present on only one
// side abort the run, listing the first ten orphans.
template <class MapA, class MapB>
void require_matching_ids(const MapA& a, const MapB& b,
                          std::string_view a_name, std::string_view b_name) {
  std::vector<std::string> orphans;
  for (const auto& [id, unused] : a) {
    if (b.find(id) == b.end()) orphans.push_back(id);
  }
  for (const auto& [id, unused] : b) {
    if (a.find(id) == a.end()) orphans.push_back(id);
  }
  if (orphans.empty()) return;
  std::sort(orphans.begin(), orphans.end());
  std::string listed;
  const std::size_t shown = std::min<std::size_t>(orphans.size(), 10);
  for (std::size_t i = 0; i < shown; ++i) {
    if (i > 0) listed += ", ";
    listed += orphans[i];
  }
  fail(orphans.size(), " ids are present in only one of ", a_name, " and ",
       b_name, ": ", listed);
}

struct SynthArgs {
  std::string mode;
  std::string corpus_path;
  std::string charset_path;
  std::size_t n = 0;
  std::uint64_t seed = 0;
  std::size_t max_len = kDefaultMaxWordLen;
  std::size_t fixed_len = 0;
  std::string out_path;
};

void run_synth(const SynthArgs& args) {
  std::optional<Corpus> corpus;
  std::optional<Charset> charset;
  if (!args.charset_path.empty()) {
    charset = read_charset_file(args.charset_path);
  }
  if (!args.corpus_path.empty()) {
    const std::string text = read_file(args.corpus_path);
    if (!charset) charset = infer_charset_from_text(text);
    corpus = tokenize_corpus(text, *charset, args.max_len);
  }
  std::vector<DatasetRecord> records;
  records.reserve(args.n);
  const auto push = [&](std::u32string word, WordOrigin origin) {
    records.push_back(
        {std::to_string(records.size()), std::move(word), origin});
  };
  if (args.mode == "wiki") {
    require(corpus.has_value(), "synth --mode wiki requires --corpus");
    for (std::u32string& w : sample_wiki(*corpus, args.n, args.seed)) {
      push(std::move(w), WordOrigin::kWiki);
    }
  } else if (args.mode == "random") {
    require(charset.has_value(),
            "synth --mode random requires --charset or --corpus");
    LengthModel lengths = corpus.has_value()
                              ? LengthModel::empirical(*corpus)
                              : LengthModel::fixed(args.fixed_len);
    if (!corpus.has_value()) {
      require(args.fixed_len >= 1,
              "synth --mode random without --corpus requires --len-fixed");
    }
    for (std::u32string& w :
         sample_random(*charset, args.n, lengths, args.seed)) {
      push(std::move(w), WordOrigin::kRandom);
    }
  } else if (args.mode == "combined") {
    require(corpus.has_value(), "synth --mode combined requires --corpus");
    for (TaggedWord& t :
         sample_combined(*corpus, *charset, args.n, args.seed)) {
      push(std::move(t.word), t.origin);
    }
  } else {
    fail("unknown synth mode \"", args.mode,
         "\" (expected wiki|random|combined)");
  }
  write_file(args.out_path, dataset_to_tsv(records));
}

struct StatsArgs {
  std::string data_path;
  std::string charset_path;
  std::int64_t many_min = 1500;
  std::int64_t medium_min = 100;
  std::string out_path;
  std::string summary_path;
};

void run_stats(const StatsArgs& args) {
  const std::vector<DatasetRecord> records = read_dataset(args.data_path);
  const Charset charset = args.charset_path.empty()
                              ? infer_charset_from_words(records)
                              : read_charset_file(args.charset_path);
  std::vector<std::u32string> words;
  words.reserve(records.size());
  for (const DatasetRecord& r : records) words.push_back(r.word);
  const CategoryThresholds thresholds{args.many_min, args.medium_min};
  const DistributionStats stats = distribution_stats(words, charset, thresholds);
  write_file(args.out_path, distribution_stats_to_csv(stats));
  if (!args.summary_path.empty()) {
    write_file(args.summary_path, distribution_stats_to_json(stats));
  }
}

struct EvalArgs {
  std::string gt_path;
  std::string pred_path;
  std::string freq_path;
  std::string charset_path;
  std::int64_t many_min = 1500;
  std::int64_t medium_min = 100;
  std::size_t max_len = kDefaultMaxDecodeLen;
  std::string out_path;
};

void run_eval(const EvalArgs& args) {
  const FrequencyTable train_table = read_frequency_table(args.freq_path);
  const Charset charset = args.charset_path.empty()
                              ? charset_from_table(train_table)
                              : read_charset_file(args.charset_path);
  std::map<std::string, std::u32string> gts;
  for (const DatasetRecord& r : read_dataset(args.gt_path)) {
    require(gts.emplace(r.id, r.word).second, args.gt_path,
            ": duplicate id \"", r.id, "\"");
  }
  std::map<std::string, Prediction> preds;
  for (PredictionRecord& r : read_predictions(args.pred_path, args.max_len)) {
    require(preds.emplace(r.id, std::move(r.prediction)).second,
            args.pred_path, ": duplicate id \"", r.id, "\"");
  }
  require_matching_ids(gts, preds, "--gt", "--pred");

  const CategoryThresholds thresholds{args.many_min, args.medium_min};
  CharTally tally;
  std::vector<std::u32string> gt_words;
  std::vector<std::u32string> pred_words;
  for (const auto& [id, gt] : gts) {
    const Prediction& pred = preds.at(id);
    tally.add(align(gt, pred.word), &charset);
    gt_words.push_back(gt);
    pred_words.push_back(pred.word);
  }
  const CharF1Report report =
      char_f1(tally, categorize(train_table, thresholds));
  const double word_acc = word_accuracy(gt_words, pred_words);
  write_file(args.out_path, char_f1_report_to_csv(report, word_acc));
}

struct EnsembleArgs {
  std::string pred_ca_path;
  std::string pred_cf_path;
  std::string level = "word";
  std::size_t max_len = kDefaultMaxDecodeLen;
  std::string out_path;
};

void run_ensemble(const EnsembleArgs& args) {
  require(args.level == "word" || args.level == "char",
          "--level must be word or char");
  std::map<std::string, Prediction> ca;
  for (PredictionRecord& r :
       read_predictions(args.pred_ca_path, args.max_len)) {
    require(ca.emplace(r.id, std::move(r.prediction)).second,
            args.pred_ca_path, ": duplicate id \"", r.id, "\"");
  }
  std::map<std::string, Prediction> cf;
  for (PredictionRecord& r :
       read_predictions(args.pred_cf_path, args.max_len)) {
    require(cf.emplace(r.id, std::move(r.prediction)).second,
            args.pred_cf_path, ": duplicate id \"", r.id, "\"");
  }
  require_matching_ids(ca, cf, "--pred-ca", "--pred-cf");

  std::vector<DecisionRow> rows;
  rows.reserve(ca.size());
  for (const auto& [id, pred_ca] : ca) {
    const Prediction& pred_cf = cf.at(id);
    DecisionRow row;
    row.id = id;
    if (args.level == "word") {
      EnsembleDecision decision;
      try {
        decision = word_level_ensemble(pred_ca, pred_cf);
      } catch (const Error& e) {
        fail("id \"", id, "\": ", e.what());
      }
      row.chosen = to_string(decision.chosen);
      row.word = decision.word;
      row.score_ca = decision.score_ca;
      row.score_cf = decision.score_cf;
    } else {
      row.chosen = "char_mix";
      row.word = char_level_ensemble(pred_ca, pred_cf);
      row.score_ca = confidence_score(pred_ca);
      row.score_cf = confidence_score(pred_cf);
    }
    rows.push_back(std::move(row));
  }
  write_file(args.out_path, decisions_to_csv(rows));
}

struct AdjustArgs {
  std::string mode;
  std::string logits_path;
  std::string manifest_path;
  std::string source_prior_path;
  std::string target_prior_path;
  std::string prior_path;
  std::string gt_path;
  std::string weights_path;
  std::string probs_path;
  double tau = 1.0;
  double gamma = 1.0;
  std::string out_path;
};

std::map<std::string, std::u32string> read_gt_map(const std::string& path) {
  std::map<std::string, std::u32string> gts;
  for (const DatasetRecord& r : read_dataset(path)) {
    require(gts.emplace(r.id, r.word).second, path, ": duplicate id \"", r.id,
            "\"");
  }
  return gts;
}

// Builds per-step distributions over the manifest classes from logits,
// optionally adjusting each step with `adjust` before the softmax.
std::vector<StepDistribution> logits_to_distributions(
    const LogitRecord& record, std::span<const char32_t> classes) {
  std::vector<StepDistribution> steps;
  steps.reserve(record.steps.size());
  for (const std::vector<double>& logits : record.steps) {
    const std::vector<double> probs = softmax(logits);
    std::vector<StepEntry> entries;
    entries.reserve(probs.size());
    for (std::size_t i = 0; i < probs.size(); ++i) {
      entries.push_back({classes[i], probs[i]});
    }
    steps.push_back(StepDistribution(std::move(entries)));
  }
  return steps;
}

void run_adjust(const AdjustArgs& args) {
  if (args.mode == "focal") {
    require(!args.probs_path.empty(), "adjust --mode focal requires --probs");
    const std::string content = read_file(args.probs_path);
    std::string out = "p,loss\n";
    const auto lines = detail::split_lines(content);
    for (std::size_t i = 0; i < lines.size(); ++i) {
      if (lines[i].empty() || lines[i][0] == '#') continue;
      const std::string where =
          args.probs_path + ":" + std::to_string(i + 1);
      const double p = detail::parse_real(lines[i], where);
      try {
        out += format_double(p) + ',' +
               format_double(focal_loss(p, args.gamma)) + '\n';
      } catch (const Error& e) {
        fail(where, ": ", e.what());
      }
    }
    write_file(args.out_path, out);
  } else if (args.mode == "tau-norm") {
    require(!args.weights_path.empty(),
            "adjust --mode tau-norm requires --weights");
    WeightsFile file = read_weights(args.weights_path);
    try {
      file.weights = tau_normalize(file.weights, args.tau);
    } catch (const Error& e) {
      fail(args.weights_path, ": ", e.what());
    }
    write_file(args.out_path, weights_to_json(file));
  } else if (args.mode == "pc-softmax") {
    require(!args.logits_path.empty() && !args.manifest_path.empty() &&
                !args.source_prior_path.empty() &&
                !args.target_prior_path.empty(),
            "adjust --mode pc-softmax requires --logits, --manifest, "
            "--source-prior, and --target-prior");
    const std::vector<char32_t> classes =
        read_class_manifest(args.manifest_path);
    const std::vector<double> source =
        read_prior(args.source_prior_path, classes);
    const std::vector<double> target =
        read_prior(args.target_prior_path, classes);
    std::string out;
    for (const LogitRecord& record :
         read_logits(args.logits_path, classes.size())) {
      nlohmann::json steps = nlohmann::json::array();
      for (const std::vector<double>& logits : record.steps) {
        steps.push_back(pc_softmax(logits, source, target));
      }
      const nlohmann::json line = {{"id", record.id}, {"steps", steps}};
      out += line.dump();
      out += '\n';
    }
    write_file(args.out_path, out);
  } else if (args.mode == "balanced-softmax" || args.mode == "word-nll") {
    require(!args.logits_path.empty() && !args.manifest_path.empty() &&
                !args.gt_path.empty(),
            "adjust --mode ", args.mode,
            " requires --logits, --manifest, and --gt");
    const bool balanced = args.mode == "balanced-softmax";
    require(!balanced || !args.prior_path.empty(),
            "adjust --mode balanced-softmax requires --prior");
    const std::vector<char32_t> classes =
        read_class_manifest(args.manifest_path);
    std::vector<double> log_prior;
    if (balanced) {
      const std::vector<double> prior = read_prior(args.prior_path, classes);
      validate_prior(prior, "train prior");
      log_prior.reserve(prior.size());
      for (double p : prior) {
        require(p > 0.0, "train prior has a zero entry");
        log_prior.push_back(std::log(p));
      }
    }
    const std::map<std::string, std::u32string> gts = read_gt_map(args.gt_path);
    std::vector<LogitRecord> records =
        read_logits(args.logits_path, classes.size());
    std::map<std::string, const LogitRecord*> by_id;
    for (const LogitRecord& r : records) {
      require(by_id.emplace(r.id, &r).second, args.logits_path,
              ": duplicate id \"", r.id, "\"");
    }
    require_matching_ids(by_id, gts, "--logits", "--gt");
    std::string out = "id,loss\n";
    for (const auto& [id, record] : by_id) {
      LogitRecord adjusted = *record;
      if (balanced) {
        for (std::vector<double>& step : adjusted.steps) {
          for (std::size_t i = 0; i < step.size(); ++i) {
            step[i] += log_prior[i];
          }
        }
      }
      const std::vector<StepDistribution> steps =
          logits_to_distributions(adjusted, classes);
      try {
        out += csv_field(id) + ',' +
               format_double(word_nll(steps, gts.at(id))) + '\n';
      } catch (const Error& e) {
        fail("id \"", id, "\": ", e.what());
      }
    }
    write_file(args.out_path, out);
  } else {
    fail("unknown adjust mode \"", args.mode,
         "\" (expected focal|tau-norm|pc-softmax|balanced-softmax|word-nll)");
  }
}

struct SimulateArgs {
  std::string config_path;
  std::string out_dir;
  std::string train_path;
  std::string charset_path;
};

void run_simulate(const SimulateArgs& args) {
  const ExperimentConfig config = read_experiment_config(args.config_path);
  if (args.train_path.empty()) {
    write_experiment_report(run_experiment(config), args.out_dir);
    return;
  }
  require(!args.charset_path.empty(),
          "simulate --train requires --charset");
  const Charset charset = read_charset_file(args.charset_path);
  // The external training list becomes the corpus: duplicate words
  // aggregate into sampling frequencies.
  std::map<std::u32string, double> counts;
  for (const DatasetRecord& r : read_dataset(args.train_path)) {
    if (const auto foreign = charset.first_foreign(r.word)) {
      fail(args.train_path, ": word \"", encode_utf8(r.word),
           "\" contains character '", symbol_to_string(*foreign),
           "' outside the charset");
    }
    require(r.word.size() <= config.max_len, args.train_path, ": word \"",
            encode_utf8(r.word), "\" exceeds max_len ", config.max_len);
    counts[r.word] += 1.0;
  }
  Corpus corpus;
  corpus.entries.reserve(counts.size());
  for (const auto& [word, count] : counts) {
    corpus.entries.push_back({word, count});
  }
  std::sort(corpus.entries.begin(), corpus.entries.end(),
            [](const Corpus::Entry& a, const Corpus::Entry& b) {
              if (a.weight != b.weight) return a.weight > b.weight;
              return a.word < b.word;
            });
  write_experiment_report(run_experiment(config, &corpus, &charset),
                          args.out_dir);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "chartail: character-level long-tail recognition toolkit.\n"
      "Synthesizes word lists, reports character distributions, evaluates\n"
      "predictions with the character-level F1 metric, ensembles two\n"
      "experts by confidence, applies logit-adjustment baselines, and runs\n"
      "the two-expert recognizer experiment."};
  app.require_subcommand(1);

  SynthArgs synth_args;
  CLI::App* synth = app.add_subcommand(
      "synth", "Sample a word list (wiki / random / combined)");
  synth->add_option("--mode", synth_args.mode, "wiki|random|combined")
      ->required();
  synth->add_option("--corpus", synth_args.corpus_path,
                    "UTF-8 text corpus to tokenize");
  synth->add_option("--charset", synth_args.charset_path,
                    "charset file (one character per line)");
  synth->add_option("--n", synth_args.n, "number of samples")->required();
  synth->add_option("--seed", synth_args.seed, "RNG seed")->required();
  synth->add_option("--max-len", synth_args.max_len,
                    "maximum word length (default 25)");
  synth->add_option("--len-fixed", synth_args.fixed_len,
                    "fixed word length for --mode random without --corpus");
  synth->add_option("--out", synth_args.out_path, "output dataset TSV")
      ->required();

  StatsArgs stats_args;
  CLI::App* stats = app.add_subcommand(
      "stats", "Character distribution statistics of a dataset");
  stats->add_option("--data", stats_args.data_path, "dataset TSV")->required();
  stats->add_option("--charset", stats_args.charset_path, "charset file");
  stats->add_option("--many-min", stats_args.many_min,
                    "Many threshold (default 1500)");
  stats->add_option("--medium-min", stats_args.medium_min,
                    "Medium threshold (default 100)");
  stats->add_option("--out", stats_args.out_path, "output stats CSV")
      ->required();
  stats->add_option("--summary", stats_args.summary_path,
                    "optional summary JSON");

  EvalArgs eval_args;
  CLI::App* eval = app.add_subcommand(
      "eval", "Char-F1 and word-accuracy evaluation of predictions");
  eval->add_option("--gt", eval_args.gt_path, "ground-truth TSV")->required();
  eval->add_option("--pred", eval_args.pred_path, "prediction JSONL")
      ->required();
  eval->add_option("--freq", eval_args.freq_path,
                   "training frequency table TSV")
      ->required();
  eval->add_option("--charset", eval_args.charset_path, "charset file");
  eval->add_option("--many-min", eval_args.many_min,
                   "Many threshold (default 1500)");
  eval->add_option("--medium-min", eval_args.medium_min,
                   "Medium threshold (default 100)");
  eval->add_option("--max-len", eval_args.max_len,
                   "maximum decode length (default 25)");
  eval->add_option("--out", eval_args.out_path, "output report CSV")
      ->required();

  EnsembleArgs ensemble_args;
  CLI::App* ensemble = app.add_subcommand(
      "ensemble", "Confidence-ensemble two prediction files");
  ensemble->add_option("--pred-ca", ensemble_args.pred_ca_path,
                       "context-aware predictions JSONL")
      ->required();
  ensemble->add_option("--pred-cf", ensemble_args.pred_cf_path,
                       "context-free predictions JSONL")
      ->required();
  ensemble->add_option("--level", ensemble_args.level,
                       "word|char (default word)");
  ensemble->add_option("--max-len", ensemble_args.max_len,
                       "maximum decode length (default 25)");
  ensemble->add_option("--out", ensemble_args.out_path,
                       "output decision CSV")
      ->required();

  AdjustArgs adjust_args;
  CLI::App* adjust = app.add_subcommand(
      "adjust", "Logit-adjustment baselines on serialized logits/weights");
  adjust->add_option("--mode", adjust_args.mode,
                     "focal|tau-norm|pc-softmax|balanced-softmax|word-nll")
      ->required();
  adjust->add_option("--logits", adjust_args.logits_path, "logits JSONL");
  adjust->add_option("--manifest", adjust_args.manifest_path,
                     "class order manifest");
  adjust->add_option("--source-prior", adjust_args.source_prior_path,
                     "source prior TSV (pc-softmax)");
  adjust->add_option("--target-prior", adjust_args.target_prior_path,
                     "target prior TSV (pc-softmax)");
  adjust->add_option("--prior", adjust_args.prior_path,
                     "training prior TSV (balanced-softmax)");
  adjust->add_option("--gt", adjust_args.gt_path, "ground-truth TSV");
  adjust->add_option("--weights", adjust_args.weights_path,
                     "classifier weights JSON (tau-norm)");
  adjust->add_option("--probs", adjust_args.probs_path,
                     "probability file, one value per line (focal)");
  adjust->add_option("--tau", adjust_args.tau, "tau (default 1.0)");
  adjust->add_option("--gamma", adjust_args.gamma, "gamma (default 1.0)");
  adjust->add_option("--out", adjust_args.out_path, "output file")
      ->required();

  SimulateArgs simulate_args;
  CLI::App* simulate = app.add_subcommand(
      "simulate", "Run the two-expert recognizer experiment");
  simulate->add_option("--config", simulate_args.config_path,
                       "experiment config JSON")
      ->required();
  simulate->add_option("--out", simulate_args.out_dir, "report directory")
      ->required();
  simulate->add_option("--train", simulate_args.train_path,
                       "dataset TSV replacing the generated corpus");
  simulate->add_option("--charset", simulate_args.charset_path,
                       "charset file (required with --train)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (synth->parsed()) run_synth(synth_args);
    if (stats->parsed()) run_stats(stats_args);
    if (eval->parsed()) run_eval(eval_args);
    if (ensemble->parsed()) run_ensemble(ensemble_args);
    if (adjust->parsed()) run_adjust(adjust_args);
    if (simulate->parsed()) run_simulate(simulate_args);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const InternalError& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
