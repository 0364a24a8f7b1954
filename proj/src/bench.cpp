#include "tweetmine/bench.hpp"

#include <atomic>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <thread>

#include "tweetmine/error.hpp"

namespace tweetmine {

namespace {

std::vector<std::string> split(std::string_view line, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (;;) {
    auto pos = line.find(sep, start);
    out.emplace_back(line.substr(start, pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

std::vector<std::string> lines_of(std::string_view text) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start < text.size()) {
    auto pos = text.find('\n', start);
    if (pos == std::string_view::npos) pos = text.size();
    out.emplace_back(text.substr(start, pos - start));
    start = pos + 1;
  }
  return out;
}

std::string fmt(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

std::string file_safe(std::string s) {
  for (char& c : s) {
    if (c == ':' || c == ',' || c == '%' || c == '/') c = '_';
  }
  return s;
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write " + path.string());
  out << text;
}

}  // namespace

std::string to_tsv(const Table& table) {
  std::string out;
  auto line = [&](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) out += (i ? "\t" : "") + cells[i];
    out += '\n';
  };
  line(table.header);
  for (const auto& r : table.rows) line(r);
  return out;
}

Table parse_tsv(std::string_view text) {
  Table t;
  auto lines = lines_of(text);
  if (lines.empty()) throw FormatError("empty table");
  t.header = split(lines[0], '\t');
  for (std::size_t i = 1; i < lines.size(); ++i) {
    auto cells = split(lines[i], '\t');
    if (cells.size() != t.header.size()) throw FormatError("table row " + std::to_string(i) + " has the wrong width");
    t.rows.push_back(std::move(cells));
  }
  return t;
}

std::string to_aligned(const Table& table) {
  std::vector<std::size_t> width(table.header.size(), 0);
  auto measure = [&](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size() && i < width.size(); ++i) width[i] = std::max(width[i], cells[i].size());
  };
  measure(table.header);
  for (const auto& r : table.rows) measure(r);
  std::string out = "# " + table.title + "\n";
  auto line = [&](const std::vector<std::string>& cells) {
    std::string l;
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) l += "  ";
      l += cells[i];
      if (i + 1 < cells.size()) l.append(width[i] - cells[i].size(), ' ');
    }
    out += l + '\n';
  };
  line(table.header);
  for (const auto& r : table.rows) line(r);
  return out;
}

Table parse_aligned(std::string_view text) {
  auto lines = lines_of(text);
  Table t;
  std::size_t first = 0;
  if (!lines.empty() && lines[0].rfind("# ", 0) == 0) {
    t.title = lines[0].substr(2);
    first = 1;
  }
  if (first >= lines.size()) throw FormatError("table has no header");
  // Column starts come from the header: each cell begins after a run of 2+ spaces.
  const std::string& head = lines[first];
  std::vector<std::size_t> starts = {0};
  for (std::size_t i = 2; i < head.size(); ++i) {
    if (head[i] != ' ' && head[i - 1] == ' ' && head[i - 2] == ' ') starts.push_back(i);
  }
  auto cut = [&](const std::string& line) {
    std::vector<std::string> cells;
    for (std::size_t c = 0; c < starts.size(); ++c) {
      const std::size_t from = std::min(starts[c], line.size());
      const std::size_t to = c + 1 < starts.size() ? std::min(starts[c + 1], line.size()) : line.size();
      std::string cell = line.substr(from, to - from);
      while (!cell.empty() && cell.back() == ' ') cell.pop_back();
      cells.push_back(cell);
    }
    return cells;
  };
  t.header = cut(head);
  for (std::size_t i = first + 1; i < lines.size(); ++i) t.rows.push_back(cut(lines[i]));
  return t;
}

void ExperimentConfig::validate() const {
  if (fractions.empty() || features.empty() || classifiers.empty()) {
    throw InvalidArgument("bench needs at least one fraction, feature set and classifier");
  }
  for (double f : fractions) {
    if (!(f > 0.0 && f <= 1.0)) throw InvalidArgument("fractions must lie in (0, 1], got " + std::to_string(f));
  }
  if (format != "sentiment140" && format != "jsonl") throw InvalidArgument("unknown dataset format " + format);
  if (repetitions == 0) throw InvalidArgument("bench needs at least one repetition");
}

std::string fraction_label(double fraction) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g%%", fraction * 100.0);
  return buf;
}

BenchResult run_bench(const Corpus& corpus, const ExperimentConfig& config) {
  config.validate();
  std::vector<Corpus> subsets;
  for (double f : config.fractions) {
    subsets.push_back(f == 1.0 ? corpus : stratified_subsample(corpus, f, config.seed));
  }

  BenchResult result;
  for (double f : config.fractions) {
    for (const auto& fs : config.features) {
      for (const auto& cs : config.classifiers) result.cells.push_back({f, fs.label(), cs.label(), std::nullopt, ""});
    }
  }
  const std::size_t nf = config.features.size(), nc = config.classifiers.size();

  auto run_cell = [&](std::size_t k) {
    const std::size_t fi = k / (nf * nc), rest = k % (nf * nc);
    auto& cell = result.cells[k];
    try {
      CvConfig cv;
      cv.repetitions = config.repetitions;
      cv.folds = config.folds;
      cv.seed = config.seed;
      cv.embedding = config.embedding;
      cv.dataset_label = fraction_label(config.fractions[fi]);
      auto report = cross_validate(subsets[fi], config.features[rest / nc], config.classifiers[rest % nc], cv);
      if (report.failed == report.runs.size()) {
        cell.error = "every run failed: " + report.runs.front().failure;
      } else {
        cell.report = std::move(report);
      }
    } catch (const std::exception& e) {
      cell.error = e.what();
    }
  };

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t k; (k = next.fetch_add(1)) < result.cells.size();) run_cell(k);
  };
  const unsigned n = std::max(1u, std::min<unsigned>(config.jobs, static_cast<unsigned>(result.cells.size())));
  if (n == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned i = 0; i < n; ++i) pool.emplace_back(worker);
  }

  auto matrix = [&](const std::string& title, auto value) {
    Table t;
    t.title = title;
    t.header = {"features", "classifier"};
    for (double f : config.fractions) t.header.push_back(fraction_label(f));
    for (std::size_t r = 0; r < nf * nc; ++r) {
      std::vector<std::string> row = {config.features[r / nc].label(), config.classifiers[r % nc].label()};
      for (std::size_t fi = 0; fi < config.fractions.size(); ++fi) {
        const auto& cell = result.cells[fi * nf * nc + r];
        row.push_back(cell.report ? value(*cell.report) : "ERR");
      }
      t.rows.push_back(std::move(row));
    }
    return t;
  };
  result.f_scores = matrix("minority-class F-score (mean over runs)", [](const CvReport& r) { return fmt(r.f1.mean, 2); });
  result.timing = matrix("classification time per run in seconds (featurize + train + predict)", [](const CvReport& r) {
    return fmt(r.featurize_s.mean + r.train_s.mean + r.predict_s.mean, 3);
  });

  result.embedding_time.title = "w2v training time in seconds (mean per repetition)";
  result.embedding_time.header = {"fraction", "w2v training time"};
  bool any_embedding = false;
  for (const auto& fs : config.features) any_embedding |= fs.uses_embedding();
  if (any_embedding) {
    for (std::size_t fi = 0; fi < config.fractions.size(); ++fi) {
      double sum = 0.0;
      std::size_t count = 0;
      bool failed = false;
      for (std::size_t r = 0; r < nf * nc; ++r) {
        if (!config.features[r / nc].uses_embedding()) continue;
        const auto& cell = result.cells[fi * nf * nc + r];
        if (!cell.report) {
          failed = true;
          continue;
        }
        for (double s : cell.report->embedding_train_s) {
          sum += s;
          ++count;
        }
      }
      result.embedding_time.rows.push_back(
          {fraction_label(config.fractions[fi]), count ? fmt(sum / static_cast<double>(count), 3) : (failed ? "ERR" : "-")});
    }
  }
  return result;
}

BenchResult run_bench(const ExperimentConfig& config) {
  config.validate();
  Corpus corpus;
  if (config.format == "sentiment140") {
    corpus = ingest_sentiment140(config.dataset, config.limit).corpus;
  } else {
    corpus = ingest_jsonl(config.dataset).corpus;
  }
  corpus.preprocess_all();
  auto result = run_bench(corpus, config);
  if (!config.output_dir.empty()) {
    const std::filesystem::path dir(config.output_dir);
    std::filesystem::create_directories(dir);
    for (const auto& [name, table] : {std::pair{"f_scores", &result.f_scores}, std::pair{"timing", &result.timing},
                                      std::pair{"w2v_time", &result.embedding_time}}) {
      write_file(dir / (std::string(name) + ".tsv"), to_tsv(*table));
      write_file(dir / (std::string(name) + ".txt"), to_aligned(*table));
    }
    for (const auto& cell : result.cells) {
      const auto stem = "cv_" + file_safe(fraction_label(cell.fraction)) + "_" + file_safe(cell.features) + "_" + cell.classifier;
      if (cell.report) {
        write_file(dir / (stem + ".tsv"), format_cv_report(*cell.report));
      } else {
        write_file(dir / (stem + ".err"), cell.error + "\n");
      }
    }
  }
  return result;
}

}  // namespace tweetmine
