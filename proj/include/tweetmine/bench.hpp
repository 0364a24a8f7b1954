#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "tweetmine/corpus.hpp"
#include "tweetmine/cv.hpp"

namespace tweetmine {

struct Table {
  std::string title;
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  bool operator==(const Table&) const = default;
};

/// Header line then one line per row; the title is not written.
std::string to_tsv(const Table& table);
Table parse_tsv(std::string_view text);
/// "# title" line, then space-padded columns separated by at least two spaces.
/// Cells must not contain two consecutive spaces.
std::string to_aligned(const Table& table);
Table parse_aligned(std::string_view text);

struct ExperimentConfig {
  std::string dataset;
  std::string format = "sentiment140";  // or "jsonl"
  std::optional<std::size_t> limit;     // rows read from the dataset
  std::vector<double> fractions = {0.001, 0.01, 0.1};
  std::vector<FeatureSpec> features;
  std::vector<ClassifierSpec> classifiers;
  std::uint64_t seed = 0;
  std::string output_dir;
  std::size_t repetitions = 5;
  std::size_t folds = 5;
  SkipGramConfig embedding;
  unsigned jobs = 1;  // matrix cells in flight

  /// Throws InvalidArgument for fractions outside (0, 1] or an empty matrix.
  void validate() const;
};

struct BenchCell {
  double fraction = 0.0;
  std::string features;
  std::string classifier;
  std::optional<CvReport> report;  // empty when the cell failed
  std::string error;
};

struct BenchResult {
  std::vector<BenchCell> cells;  // ordered by (fraction, feature, classifier)
  Table f_scores;                // minority-class F, 2 decimals, one column per fraction
  Table timing;                  // mean featurize + train + predict seconds per run
  Table embedding_time;          // mean skip-gram training seconds per fraction
};

/// "0.1%", "1%", "10%".
std::string fraction_label(double fraction);

/// Runs the matrix on an already loaded, preprocessed corpus. Writes nothing.
BenchResult run_bench(const Corpus& corpus, const ExperimentConfig& config);
/// Loads and preprocesses `config.dataset`, runs the matrix and writes the
/// tables (.tsv and .txt) and per-cell CV reports into `config.output_dir`.
BenchResult run_bench(const ExperimentConfig& config);

}  // namespace tweetmine
