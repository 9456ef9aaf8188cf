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

#ifndef CHARTAIL_IO_HPP_
#define CHARTAIL_IO_HPP_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_set>
#include <utility>
#include <vector>

#include "json.hpp"

#include "chartail/charset.hpp"
#include "chartail/ensemble.hpp"
#include "chartail/error.hpp"
#include "chartail/experiment.hpp"
#include "chartail/metrics.hpp"
#include "chartail/synth.hpp"

namespace chartail {

// ---------------------------------------------------------------------
// Basic file and formatting helpers. All outputs are UTF-8 with LF line
// endings; all floating-point fields use fixed six-decimal formatting so
// seeded runs are byte-identical.
// ---------------------------------------------------------------------

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  require(in.good(), "cannot open ", path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  require(!in.bad(), "error while reading ", path.string());
  return buffer.str();
}

inline void write_file(const std::filesystem::path& path,
                       std::string_view content) {
  if (path.has_parent_path()) {
    std::filesystem::create_directories(path.parent_path());
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  require(out.good(), "cannot write ", path.string());
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  require(out.good(), "error while writing ", path.string());
}

inline std::string format_double(double value, int precision = 6) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  if (value == 0.0) value = 0.0;  // normalize -0
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), "%.*f", precision, value);
  return buffer;
}

/// Quotes a CSV field only when needed (commas, quotes, newlines).
inline std::string csv_field(std::string_view value) {
  const bool needs_quoting =
      value.find_first_of(",\"\n\r") != std::string_view::npos;
  if (!needs_quoting) return std::string(value);
  std::string out = "\"";
  for (char c : value) {
    if (c == '"') out += "\"\"";
    else out += c;
  }
  out += "\"";
  return out;
}

namespace detail {

inline std::vector<std::string_view> split_lines(std::string_view text) {
  std::vector<std::string_view> lines;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) {
      if (start < text.size()) lines.push_back(text.substr(start));
      break;
    }
    std::string_view line = text.substr(start, end - start);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    lines.push_back(line);
    start = end + 1;
  }
  return lines;
}

inline std::vector<std::string_view> split_tabs(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  for (;;) {
    const std::size_t end = line.find('\t', start);
    if (end == std::string_view::npos) {
      fields.push_back(line.substr(start));
      return fields;
    }
    fields.push_back(line.substr(start, end - start));
    start = end + 1;
  }
}

inline std::int64_t parse_int(std::string_view s, std::string_view where) {
  std::int64_t value = 0;
  bool any = false;
  bool negative = false;
  std::size_t i = 0;
  if (i < s.size() && (s[i] == '-' || s[i] == '+')) {
    negative = s[i] == '-';
    ++i;
  }
  for (; i < s.size(); ++i) {
    require(s[i] >= '0' && s[i] <= '9', where, ": invalid integer \"", s,
            "\"");
    value = value * 10 + (s[i] - '0');
    any = true;
  }
  require(any, where, ": invalid integer \"", s, "\"");
  return negative ? -value : value;
}

inline double parse_real(std::string_view s, std::string_view where) {
  try {
    std::size_t consumed = 0;
    const double value = std::stod(std::string(s), &consumed);
    require(consumed == s.size(), where, ": invalid number \"", s, "\"");
    return value;
  } catch (const Error&) {
    throw;
  } catch (const std::exception&) {
    fail(where, ": invalid number \"", s, "\"");
  }
}

}  // namespace detail

// ---------------------------------------------------------------------
// Charset file: one symbol per line; blank lines and lines starting with
// '#' are skipped. Symbol order in the file is the class order.
// ---------------------------------------------------------------------

inline Charset read_charset_file(const std::filesystem::path& path) {
  const std::string content = read_file(path);
  const auto lines = detail::split_lines(content);
  std::vector<char32_t> symbols;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const std::string_view line = lines[i];
    if (line.empty() || line[0] == '#') continue;
    std::u32string decoded;
    try {
      decoded = decode_utf8(line);
    } catch (const Error& e) {
      fail(path.string(), ":", i + 1, ": ", e.what());
    }
    if (decoded.size() != 1) {
      fail(path.string(), ":", i + 1, ": expected one character per line");
    }
    symbols.push_back(decoded[0]);
  }
  try {
    return Charset(std::move(symbols));
  } catch (const Error& e) {
    fail(path.string(), ": ", e.what());
  }
}

inline std::string charset_to_file(const Charset& charset) {
  std::string out;
  for (char32_t c : charset.symbols()) {
    out += encode_utf8(c);
    out += '\n';
  }
  return out;
}

// ---------------------------------------------------------------------
// Frequency table TSV: `#mode=` and `#total=` header lines, then
// `character<TAB>count` rows sorted by descending count (ties by code
// point).
// ---------------------------------------------------------------------

inline std::string frequency_table_to_tsv(const FrequencyTable& table) {
  std::vector<std::pair<char32_t, std::int64_t>> rows(table.counts().begin(),
                                                      table.counts().end());
  std::sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });
  std::string out = "#mode=" + to_string(table.mode()) + "\n#total=" +
                    std::to_string(table.total_samples()) + "\n";
  for (const auto& [c, n] : rows) {
    out += encode_utf8(c);
    out += '\t';
    out += std::to_string(n);
    out += '\n';
  }
  return out;
}

inline void write_frequency_table(const FrequencyTable& table,
                                  const std::filesystem::path& path) {
  write_file(path, frequency_table_to_tsv(table));
}

inline FrequencyTable read_frequency_table(const std::filesystem::path& path) {
  const std::string content = read_file(path);
  const auto lines = detail::split_lines(content);
  require(lines.size() >= 2 && lines[0].starts_with("#mode=") &&
              lines[1].starts_with("#total="),
          path.string(),
          ": expected '#mode=' and '#total=' header lines");
  const CountMode mode = count_mode_from_string(lines[0].substr(6));
  const std::int64_t total =
      detail::parse_int(lines[1].substr(7), path.string() + ":2");
  std::map<char32_t, std::int64_t> counts;
  for (std::size_t i = 2; i < lines.size(); ++i) {
    if (lines[i].empty()) continue;
    const std::string where = path.string() + ":" + std::to_string(i + 1);
    const auto fields = detail::split_tabs(lines[i]);
    require(fields.size() == 2, where, ": expected `character<TAB>count`");
    std::u32string symbol;
    try {
      symbol = decode_utf8(fields[0]);
    } catch (const Error& e) {
      fail(where, ": ", e.what());
    }
    require(symbol.size() == 1, where, ": expected a single character");
    const std::int64_t count = detail::parse_int(fields[1], where);
    require(count >= 0, where, ": negative count");
    const bool inserted = counts.emplace(symbol[0], count).second;
    require(inserted, where, ": duplicate character");
  }
  try {
    return FrequencyTable(mode, total, std::move(counts));
  } catch (const Error& e) {
    fail(path.string(), ": ", e.what());
  }
}

/// The charset implied by a frequency table (its key set, in code-point
/// order). Used when `eval` is given no explicit charset file.
inline Charset charset_from_table(const FrequencyTable& table) {
  std::vector<char32_t> symbols;
  symbols.reserve(table.counts().size());
  for (const auto& [c, n] : table.counts()) symbols.push_back(c);
  return Charset(std::move(symbols));
}

// ---------------------------------------------------------------------
// Dataset TSV: `id<TAB>word<TAB>origin`; `eval --gt` also accepts the
// two-column `id<TAB>word` form.
// ---------------------------------------------------------------------

struct DatasetRecord {
  std::string id;
  std::u32string word;
  std::optional<WordOrigin> origin;
};

inline std::string dataset_to_tsv(std::span<const DatasetRecord> records) {
  std::string out;
  for (const DatasetRecord& r : records) {
    out += r.id;
    out += '\t';
    out += encode_utf8(r.word);
    if (r.origin) {
      out += '\t';
      out += to_string(*r.origin);
    }
    out += '\n';
  }
  return out;
}

inline std::vector<DatasetRecord> read_dataset(
    const std::filesystem::path& path) {
  const std::string content = read_file(path);
  const auto lines = detail::split_lines(content);
  std::vector<DatasetRecord> records;
  records.reserve(lines.size());
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (lines[i].empty()) continue;
    const std::string where = path.string() + ":" + std::to_string(i + 1);
    const auto fields = detail::split_tabs(lines[i]);
    require(fields.size() == 2 || fields.size() == 3, where,
            ": expected `id<TAB>word[<TAB>origin]`");
    DatasetRecord record;
    record.id = std::string(fields[0]);
    require(!record.id.empty(), where, ": empty id");
    try {
      record.word = decode_utf8(fields[1]);
    } catch (const Error& e) {
      fail(where, ": ", e.what());
    }
    if (fields.size() == 3) {
      try {
        record.origin = word_origin_from_string(fields[2]);
      } catch (const Error& e) {
        fail(where, ": ", e.what());
      }
    }
    records.push_back(std::move(record));
  }
  require(!records.empty(), path.string(), ": empty dataset");
  return records;
}

// ---------------------------------------------------------------------
// Prediction JSONL: one object per line,
//   {"id": str, "word": str, "steps": [{"p": [[char, prob], ...]}]}
// Each step lists its top-k entries; unlisted symbols have probability
// zero (only the maximum matters for the scores). The declared word must
// match the argmax decode of the steps.
// ---------------------------------------------------------------------

struct PredictionRecord {
  std::string id;
  Prediction prediction;
};

inline std::string prediction_to_json_line(const PredictionRecord& record) {
  nlohmann::json steps = nlohmann::json::array();
  for (const StepDistribution& step : record.prediction.steps) {
    nlohmann::json entries = nlohmann::json::array();
    for (const StepEntry& e : step.entries()) {
      entries.push_back({symbol_to_string(e.symbol), e.prob});
    }
    steps.push_back({{"p", std::move(entries)}});
  }
  const nlohmann::json line = {{"id", record.id},
                               {"word", encode_utf8(record.prediction.word)},
                               {"steps", std::move(steps)}};
  return line.dump();
}

inline std::string predictions_to_jsonl(
    std::span<const PredictionRecord> records) {
  std::string out;
  for (const PredictionRecord& r : records) {
    out += prediction_to_json_line(r);
    out += '\n';
  }
  return out;
}

inline std::vector<PredictionRecord> read_predictions(
    const std::filesystem::path& path,
    std::size_t max_len = kDefaultMaxDecodeLen) {
  const std::string content = read_file(path);
  const auto lines = detail::split_lines(content);
  std::vector<PredictionRecord> records;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (lines[i].empty()) continue;
    const std::string where = path.string() + ":" + std::to_string(i + 1);
    nlohmann::json parsed;
    try {
      parsed = nlohmann::json::parse(lines[i]);
    } catch (const std::exception& e) {
      fail(where, ": invalid JSON: ", e.what());
    }
    try {
      require(parsed.is_object() && parsed.contains("id") &&
                  parsed.contains("word") && parsed.contains("steps"),
              "expected an object with id, word, and steps");
      PredictionRecord record;
      record.id = parsed.at("id").get<std::string>();
      require(!record.id.empty(), "empty id");
      const std::u32string declared =
          decode_utf8(parsed.at("word").get<std::string>());
      std::vector<StepDistribution> steps;
      for (const nlohmann::json& step : parsed.at("steps")) {
        require(step.is_object() && step.contains("p"),
                "each step must be an object with a \"p\" array");
        std::vector<StepEntry> entries;
        for (const nlohmann::json& entry : step.at("p")) {
          require(entry.is_array() && entry.size() == 2,
                  "each entry must be a [char, prob] pair");
          entries.push_back({symbol_from_string(entry[0].get<std::string>()),
                             entry[1].get<double>()});
        }
        steps.push_back(StepDistribution(std::move(entries)));
      }
      record.prediction = Prediction::from_steps(std::move(steps), max_len);
      require(record.prediction.word == declared, "declared word \"",
              encode_utf8(declared),
              "\" does not match the argmax decode \"",
              encode_utf8(record.prediction.word), "\"");
      records.push_back(std::move(record));
    } catch (const Error& e) {
      fail(where, ": ", e.what());
    } catch (const std::exception& e) {
      fail(where, ": ", e.what());
    }
  }
  require(!records.empty(), path.string(), ": no predictions");
  return records;
}

// ---------------------------------------------------------------------
// Class manifest (one symbol token per line, `<eos>`/`<pad>`/`<unk>`
// allowed), prior TSV (`class<TAB>prob`), logits JSONL
// ({"id": str, "steps": [[...], ...]}), and classifier weights JSON.
// ---------------------------------------------------------------------

inline std::vector<char32_t> read_class_manifest(
    const std::filesystem::path& path) {
  const std::string content = read_file(path);
  const auto lines = detail::split_lines(content);
  std::vector<char32_t> classes;
  std::unordered_set<char32_t> seen;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const std::string_view line = lines[i];
    if (line.empty() || line[0] == '#') continue;
    const std::string where = path.string() + ":" + std::to_string(i + 1);
    try {
      const char32_t symbol = symbol_from_string(line);
      require(seen.insert(symbol).second, "duplicate class");
      classes.push_back(symbol);
    } catch (const Error& e) {
      fail(where, ": ", e.what());
    }
  }
  require(!classes.empty(), path.string(), ": empty class manifest");
  return classes;
}

/// Reads a prior TSV and orders it by the manifest. Every manifest class
/// must be present exactly once.
inline std::vector<double> read_prior(const std::filesystem::path& path,
                                      std::span<const char32_t> classes) {
  const std::string content = read_file(path);
  const auto lines = detail::split_lines(content);
  std::map<char32_t, double> by_class;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (lines[i].empty() || lines[i][0] == '#') continue;
    const std::string where = path.string() + ":" + std::to_string(i + 1);
    const auto fields = detail::split_tabs(lines[i]);
    require(fields.size() == 2, where, ": expected `class<TAB>prob`");
    char32_t symbol = 0;
    try {
      symbol = symbol_from_string(fields[0]);
    } catch (const Error& e) {
      fail(where, ": ", e.what());
    }
    const double prob = detail::parse_real(fields[1], where);
    require(by_class.emplace(symbol, prob).second, where,
            ": duplicate class");
  }
  std::vector<double> prior;
  prior.reserve(classes.size());
  for (char32_t c : classes) {
    const auto it = by_class.find(c);
    require(it != by_class.end(), path.string(), ": missing prior for class ",
            symbol_to_string(c));
    prior.push_back(it->second);
  }
  require(by_class.size() == classes.size(), path.string(),
          ": prior lists classes that are not in the manifest");
  return prior;
}

struct LogitRecord {
  std::string id;
  std::vector<std::vector<double>> steps;
};

inline std::vector<LogitRecord> read_logits(
    const std::filesystem::path& path, std::size_t num_classes) {
  const std::string content = read_file(path);
  const auto lines = detail::split_lines(content);
  std::vector<LogitRecord> records;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (lines[i].empty()) continue;
    const std::string where = path.string() + ":" + std::to_string(i + 1);
    try {
      const nlohmann::json parsed = nlohmann::json::parse(lines[i]);
      require(parsed.is_object() && parsed.contains("id") &&
                  parsed.contains("steps"),
              "expected an object with id and steps");
      LogitRecord record;
      record.id = parsed.at("id").get<std::string>();
      require(!record.id.empty(), "empty id");
      for (const nlohmann::json& step : parsed.at("steps")) {
        require(step.is_array(), "steps must be arrays of numbers");
        std::vector<double> logits;
        for (const nlohmann::json& v : step) {
          logits.push_back(v.get<double>());
        }
        require(logits.size() == num_classes, "step has ", logits.size(),
                " logits, manifest has ", num_classes, " classes");
        record.steps.push_back(std::move(logits));
      }
      require(!record.steps.empty(), "record has no steps");
      records.push_back(std::move(record));
    } catch (const Error& e) {
      fail(where, ": ", e.what());
    } catch (const std::exception& e) {
      fail(where, ": invalid JSON: ", e.what());
    }
  }
  require(!records.empty(), path.string(), ": no logit records");
  return records;
}

struct WeightsFile {
  std::vector<std::string> classes;
  std::vector<std::vector<double>> weights;
};

inline WeightsFile read_weights(const std::filesystem::path& path) {
  WeightsFile file;
  try {
    const nlohmann::json parsed = nlohmann::json::parse(read_file(path));
    require(parsed.is_object() && parsed.contains("classes") &&
                parsed.contains("weights"),
            "expected an object with classes and weights");
    file.classes = parsed.at("classes").get<std::vector<std::string>>();
    file.weights =
        parsed.at("weights").get<std::vector<std::vector<double>>>();
    require(file.classes.size() == file.weights.size(),
            "classes and weights differ in length");
  } catch (const Error& e) {
    fail(path.string(), ": ", e.what());
  } catch (const std::exception& e) {
    fail(path.string(), ": invalid JSON: ", e.what());
  }
  return file;
}

inline std::string weights_to_json(const WeightsFile& file) {
  const nlohmann::json out = {{"classes", file.classes},
                              {"weights", file.weights}};
  return out.dump(2) + "\n";
}

// ---------------------------------------------------------------------
// Evaluation report CSV:
//   char,category,tp,fp,fn,precision,recall,f1,support
// then summary footer rows FEW, MEDIUM, MANY, MACRO, WORD_ACC with the
// value in the f1 column. Characters out of charset are reported under
// the `<unk>` row (category `unk`) and excluded from every average.
// ---------------------------------------------------------------------

inline std::string char_f1_report_to_csv(const CharF1Report& report,
                                         double word_acc) {
  std::string out = "char,category,tp,fp,fn,precision,recall,f1,support\n";
  for (const CharF1Report::Row& row : report.rows) {
    out += csv_field(symbol_to_string(row.symbol));
    out += ',';
    out += row.category ? to_string(*row.category) : "unk";
    out += ',';
    out += std::to_string(row.tally.tp);
    out += ',';
    out += std::to_string(row.tally.fp);
    out += ',';
    out += std::to_string(row.tally.fn);
    out += ',';
    out += format_double(row.precision);
    out += ',';
    out += format_double(row.recall);
    out += ',';
    out += format_double(row.f1);
    out += ',';
    out += std::to_string(row.support);
    out += '\n';
  }
  const auto footer = [&](std::string_view label, double value) {
    out += label;
    out += ",,,,,,,";
    out += format_double(value);
    out += ",\n";
  };
  footer("FEW", report.f1_of(CharCategory::kFew));
  footer("MEDIUM", report.f1_of(CharCategory::kMedium));
  footer("MANY", report.f1_of(CharCategory::kMany));
  footer("MACRO", report.macro_f1);
  footer("WORD_ACC", word_acc);
  return out;
}

// ---------------------------------------------------------------------
// Ensemble decision log CSV: id,chosen,score_ca,score_cf,word. For the
// character-level ablation the chosen column reads `char_mix`.
// ---------------------------------------------------------------------

struct DecisionRow {
  std::string id;
  std::string chosen;
  double score_ca;
  double score_cf;
  std::u32string word;
};

inline std::string decisions_to_csv(std::span<const DecisionRow> rows) {
  std::string out = "id,chosen,score_ca,score_cf,word\n";
  for (const DecisionRow& r : rows) {
    out += csv_field(r.id);
    out += ',';
    out += r.chosen;
    out += ',';
    out += format_double(r.score_ca);
    out += ',';
    out += format_double(r.score_cf);
    out += ',';
    out += csv_field(encode_utf8(r.word));
    out += '\n';
  }
  return out;
}

// ---------------------------------------------------------------------
// Distribution stats CSV: char,count_per_sample,count_per_occurrence,
// category; rows sorted by descending per-sample count. A summary JSON
// carries category counts and proportions.
// ---------------------------------------------------------------------

inline std::string distribution_stats_to_csv(const DistributionStats& stats) {
  std::vector<std::pair<char32_t, std::int64_t>> order(
      stats.per_sample.counts().begin(), stats.per_sample.counts().end());
  std::sort(order.begin(), order.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });
  std::string out = "char,count_per_sample,count_per_occurrence,category\n";
  for (const auto& [c, per_sample] : order) {
    out += csv_field(symbol_to_string(c));
    out += ',';
    out += std::to_string(per_sample);
    out += ',';
    out += std::to_string(stats.per_occurrence.count(c));
    out += ',';
    out += to_string(category_of(stats.categories, c));
    out += '\n';
  }
  return out;
}

inline std::string distribution_stats_to_json(const DistributionStats& stats) {
  nlohmann::json out;
  out["total_samples"] = stats.per_sample.total_samples();
  for (const CharCategory cat :
       {CharCategory::kFew, CharCategory::kMedium, CharCategory::kMany}) {
    const std::string name = to_string(cat);
    out["category_chars"][name] = stats.chars_in(cat);
    out["category_proportion"][name] = stats.proportion_of(cat);
  }
  return out.dump(2) + "\n";
}

// ---------------------------------------------------------------------
// Experiment config JSON. All fields are optional and default to the
// desk-scale configuration; unknown keys are rejected to catch typos.
// ---------------------------------------------------------------------

inline ExperimentConfig read_experiment_config(
    const std::filesystem::path& path) {
  nlohmann::json parsed;
  try {
    parsed = nlohmann::json::parse(read_file(path));
    require(parsed.is_object(), "config must be a JSON object");
  } catch (const Error& e) {
    fail(path.string(), ": ", e.what());
  } catch (const std::exception& e) {
    fail(path.string(), ": invalid JSON: ", e.what());
  }
  ExperimentConfig config;
  try {
    for (const auto& [key, value] : parsed.items()) {
      if (key == "charset_size") {
        config.charset_size = value.get<std::size_t>();
      } else if (key == "dim") {
        config.dim = value.get<std::size_t>();
      } else if (key == "sigma") {
        config.sigma = value.get<double>();
      } else if (key == "confusable_fraction") {
        config.confusable_fraction = value.get<double>();
      } else if (key == "zipf_exponent") {
        config.zipf_exponent = value.get<double>();
      } else if (key == "n_train") {
        config.n_train = value.get<std::size_t>();
      } else if (key == "n_test") {
        config.n_test = value.get<std::size_t>();
      } else if (key == "max_len") {
        config.max_len = value.get<std::size_t>();
      } else if (key == "smoothing_k") {
        config.smoothing_k = value.get<double>();
      } else if (key == "seeds") {
        config.seeds = value.get<std::vector<std::uint64_t>>();
      } else if (key == "vocab_size") {
        config.vocab_size = value.get<std::size_t>();
      } else if (key == "char_exponent") {
        config.char_exponent = value.get<double>();
      } else if (key == "char_shift") {
        config.char_shift = value.get<double>();
      } else if (key == "mean_word_len") {
        config.mean_word_len = value.get<double>();
      } else if (key == "many_min") {
        config.thresholds.many_min = value.get<std::int64_t>();
      } else if (key == "medium_min") {
        config.thresholds.medium_min = value.get<std::int64_t>();
      } else {
        fail("unknown config key \"", key, "\"");
      }
    }
    config.validate();
  } catch (const Error& e) {
    fail(path.string(), ": ", e.what());
  } catch (const std::exception& e) {
    fail(path.string(), ": ", e.what());
  }
  return config;
}

// ---------------------------------------------------------------------
// Experiment report: a directory of plot-ready CSVs plus a summary JSON.
// Aggregate rows carry `mean` in the seed column.
// ---------------------------------------------------------------------

inline void write_experiment_report(const ExperimentReport& report,
                                    const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  const std::size_t n_seeds = report.seeds.size();

  // accuracy.csv
  {
    std::string out = "seed,test_set,method,word_accuracy\n";
    for (const SeedReport& seed : report.seeds) {
      for (const TestSet set : kAllTestSets) {
        for (const Method method : kAllMethods) {
          out += std::to_string(seed.seed) + ',' + to_string(set) + ',' +
                 to_string(method) + ',' +
                 format_double(seed.test_set(set).method(method).word_accuracy) +
                 '\n';
        }
      }
    }
    for (const TestSet set : kAllTestSets) {
      for (const Method method : kAllMethods) {
        out += "mean," + to_string(set) + ',' + to_string(method) + ',' +
               format_double(report.mean_accuracy(set, method)) + '\n';
      }
    }
    write_file(dir / "accuracy.csv", out);
  }

  // char_f1.csv
  {
    std::string out = "seed,test_set,method,f1_few,f1_medium,f1_many,f1_macro\n";
    const auto row = [&](const std::string& seed_label, TestSet set,
                         Method method, const MethodEval& eval) {
      out += seed_label + ',' + to_string(set) + ',' + to_string(method) +
             ',' + format_double(eval.f1_few) + ',' +
             format_double(eval.f1_medium) + ',' +
             format_double(eval.f1_many) + ',' +
             format_double(eval.f1_macro) + '\n';
    };
    for (const SeedReport& seed : report.seeds) {
      for (const TestSet set : kAllTestSets) {
        for (const Method method : kAllMethods) {
          row(std::to_string(seed.seed), set, method,
              seed.test_set(set).method(method));
        }
      }
    }
    for (const TestSet set : kAllTestSets) {
      for (const Method method : kAllMethods) {
        MethodEval mean;
        for (const SeedReport& seed : report.seeds) {
          const MethodEval& eval = seed.test_set(set).method(method);
          mean.f1_few += eval.f1_few / static_cast<double>(n_seeds);
          mean.f1_medium += eval.f1_medium / static_cast<double>(n_seeds);
          mean.f1_many += eval.f1_many / static_cast<double>(n_seeds);
          mean.f1_macro += eval.f1_macro / static_cast<double>(n_seeds);
        }
        row("mean", set, method, mean);
      }
    }
    write_file(dir / "char_f1.csv", out);
  }

  // selection_ratio.csv
  {
    std::string out = "seed,test_set,context_aware_ratio,context_free_ratio\n";
    for (const SeedReport& seed : report.seeds) {
      for (const TestSet set : kAllTestSets) {
        out += std::to_string(seed.seed) + ',' + to_string(set) + ',' +
               format_double(seed.test_set(set).selection_ratio_ca) + ',' +
               format_double(seed.test_set(set).selection_ratio_cf) + '\n';
      }
    }
    for (const TestSet set : kAllTestSets) {
      double ca = 0.0;
      for (const SeedReport& seed : report.seeds) {
        ca += seed.test_set(set).selection_ratio_ca /
              static_cast<double>(n_seeds);
      }
      out += "mean," + to_string(set) + ',' + format_double(ca) + ',' +
             format_double(1.0 - ca) + '\n';
    }
    write_file(dir / "selection_ratio.csv", out);
  }

  // category_proportion.csv
  {
    std::string out =
        "seed,test_set,few_proportion,medium_proportion,many_proportion\n";
    for (const SeedReport& seed : report.seeds) {
      for (const TestSet set : kAllTestSets) {
        const TestSetEval& eval = seed.test_set(set);
        out += std::to_string(seed.seed) + ',' + to_string(set) + ',' +
               format_double(eval.few_proportion) + ',' +
               format_double(eval.medium_proportion) + ',' +
               format_double(eval.many_proportion) + '\n';
      }
    }
    write_file(dir / "category_proportion.csv", out);
  }

  // gt_probability.csv
  {
    std::string out =
        "seed,rank,char,category,train_count,observations,"
        "mean_p_context_aware,mean_p_context_free\n";
    for (const SeedReport& seed : report.seeds) {
      for (const GtProbRow& row : seed.gt_prob_curve) {
        out += std::to_string(seed.seed) + ',' + std::to_string(row.rank) +
               ',' + csv_field(symbol_to_string(row.symbol)) + ',' +
               to_string(row.category) + ',' +
               std::to_string(row.train_count) + ',' +
               std::to_string(row.observations) + ',' +
               format_double(row.mean_p_ca) + ',' +
               format_double(row.mean_p_cf) + '\n';
      }
    }
    write_file(dir / "gt_probability.csv", out);
  }

  // summary.json
  {
    nlohmann::json summary;
    const ExperimentConfig& c = report.config;
    summary["config"] = {{"charset_size", c.charset_size},
                         {"dim", c.dim},
                         {"sigma", c.sigma},
                         {"confusable_fraction", c.confusable_fraction},
                         {"zipf_exponent", c.zipf_exponent},
                         {"n_train", c.n_train},
                         {"n_test", c.n_test},
                         {"max_len", c.max_len},
                         {"smoothing_k", c.smoothing_k},
                         {"seeds", c.seeds},
                         {"vocab_size", c.vocab_size},
                         {"char_exponent", c.char_exponent},
                         {"char_shift", c.char_shift},
                         {"mean_word_len", c.mean_word_len},
                         {"many_min", c.thresholds.many_min},
                         {"medium_min", c.thresholds.medium_min}};
    nlohmann::json per_seed = nlohmann::json::array();
    for (const SeedReport& seed : report.seeds) {
      nlohmann::json s;
      s["seed"] = seed.seed;
      s["charset_few"] = seed.charset_category_count[0];
      s["charset_medium"] = seed.charset_category_count[1];
      s["charset_many"] = seed.charset_category_count[2];
      for (const TestSet set : kAllTestSets) {
        nlohmann::json t;
        const TestSetEval& eval = seed.test_set(set);
        for (const Method method : kAllMethods) {
          t[to_string(method)] = eval.method(method).word_accuracy;
        }
        t["selection_ratio_context_aware"] = eval.selection_ratio_ca;
        t["many_proportion"] = eval.many_proportion;
        s[to_string(set)] = std::move(t);
      }
      per_seed.push_back(std::move(s));
    }
    summary["per_seed"] = std::move(per_seed);
    nlohmann::json means;
    for (const TestSet set : kAllTestSets) {
      nlohmann::json t;
      for (const Method method : kAllMethods) {
        t[to_string(method)] = report.mean_accuracy(set, method);
      }
      means[to_string(set)] = std::move(t);
    }
    summary["mean_accuracy"] = std::move(means);
    write_file(dir / "summary.json", summary.dump(2) + "\n");
  }
}

}  // namespace chartail

#endif  // CHARTAIL_IO_HPP_
