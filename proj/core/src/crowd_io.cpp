#include "cmapsum/crowd_io.hpp"

#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "cmapsum/errors.hpp"

namespace cmapsum::crowd {

using nlohmann::json;

namespace {

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> cols;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    cols.push_back(line.substr(start, comma - start));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return cols;
}

void check_field(const std::string& value, const std::string& name, std::size_t line_no,
                 const std::string& file) {
  if (value.empty()) throw ParseError(file, line_no, "empty " + name);
  if (value.find(',') != std::string::npos) {
    throw ParseError(file, line_no, name + " contains a comma");
  }
}

// Returns data rows, skipping an optional header whose first cell
// matches `header_first`.
std::vector<std::pair<std::size_t, std::vector<std::string>>> read_rows(
    std::istream& in, const std::string& name, const std::string& header_first,
    std::size_t min_cols) {
  std::vector<std::pair<std::size_t, std::vector<std::string>>> rows;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    auto cols = split_csv(line);
    if (line_no == 1 && !cols.empty() && cols[0] == header_first) continue;
    if (cols.size() < min_cols) {
      throw ParseError(name, line_no,
                       "expected " + std::to_string(min_cols) + " comma-separated fields");
    }
    rows.emplace_back(line_no, std::move(cols));
  }
  return rows;
}

}  // namespace

std::vector<LikertLabel> read_likert_csv(std::istream& in, const std::string& name) {
  std::vector<LikertLabel> labels;
  for (const auto& [line_no, cols] : read_rows(in, name, "worker", 3)) {
    LikertLabel label;
    label.worker = cols[0];
    label.proposition = cols[1];
    check_field(label.worker, "worker", line_no, name);
    check_field(label.proposition, "proposition", line_no, name);
    try {
      label.value = std::stoi(cols[2]);
    } catch (const std::exception&) {
      throw ParseError(name, line_no, "bad likert value '" + cols[2] + "'");
    }
    if (label.value < 1 || label.value > 5) {
      throw ParseError(name, line_no, "likert value outside {1..5}");
    }
    labels.push_back(std::move(label));
  }
  return labels;
}

void write_likert_csv(const std::vector<LikertLabel>& labels, std::ostream& out) {
  out << "worker,proposition,value\n";
  for (const auto& label : labels) {
    out << label.worker << ',' << label.proposition << ',' << label.value << '\n';
  }
}

std::vector<ComparisonLabel> read_comparisons_csv(std::istream& in, const std::string& name) {
  std::vector<ComparisonLabel> labels;
  for (const auto& [line_no, cols] : read_rows(in, name, "worker", 4)) {
    try {
      labels.push_back(ComparisonLabel::make(cols[0], cols[1], cols[2], cols[3]));
    } catch (const ValidationError& e) {
      throw ParseError(name, line_no, e.what());
    }
  }
  return labels;
}

void write_comparisons_csv(const std::vector<ComparisonLabel>& labels, std::ostream& out) {
  out << "worker,a,b,winner\n";
  for (const auto& label : labels) {
    out << label.worker << ',' << label.a << ',' << label.b << ',' << label.winner << '\n';
  }
}

std::vector<ComparisonLabel> read_orderings_csv(std::istream& in, const std::string& name) {
  std::vector<ComparisonLabel> labels;
  for (const auto& [line_no, cols] : read_rows(in, name, "worker", 2 + kTaskSize)) {
    TaskBatch batch;
    batch.kind = BatchKind::kOrdering;
    std::array<std::string, kTaskSize> ordering;
    for (std::size_t k = 0; k < kTaskSize; ++k) {
      check_field(cols[2 + k], "rank" + std::to_string(k + 1), line_no, name);
      ordering[k] = cols[2 + k];
      batch.propositions[k] = cols[2 + k];
    }
    try {
      auto expanded = ordering_to_comparisons(batch, ordering, cols[0]);
      labels.insert(labels.end(), std::make_move_iterator(expanded.begin()),
                    std::make_move_iterator(expanded.end()));
    } catch (const ValidationError& e) {
      throw ParseError(name, line_no, e.what());
    }
  }
  return labels;
}

void write_means_csv(const std::map<std::string, double>& means, std::ostream& out) {
  out << "proposition,mean\n";
  out << std::setprecision(10);
  for (const auto& [prop, mean] : means) {
    out << prop << ',' << mean << '\n';
  }
}

std::map<std::string, double> read_means_csv(std::istream& in, const std::string& name) {
  std::map<std::string, double> means;
  for (const auto& [line_no, cols] : read_rows(in, name, "proposition", 2)) {
    check_field(cols[0], "proposition", line_no, name);
    try {
      means[cols[0]] = std::stod(cols[1]);
    } catch (const std::exception&) {
      throw ParseError(name, line_no, "bad mean '" + cols[1] + "'");
    }
  }
  return means;
}

void write_ranking_csv(const RankingResult& result, std::ostream& out) {
  out << "rank,proposition,mu,sigma,likert_mean\n";
  out << std::setprecision(10);
  std::size_t rank = 0;
  for (const auto& rp : result.ranking) {
    out << ++rank << ',' << rp.id << ',' << rp.rating.mu << ',' << rp.rating.sigma << ','
        << rp.likert_mean << '\n';
  }
}

std::string SimulatorConfig::to_json() const {
  const json j{{"propositions", propositions},
               {"workers", workers},
               {"noise_sigma", noise_sigma},
               {"contrarian_fraction", contrarian_fraction},
               {"pair_fraction", pair_fraction},
               {"strategy", strategy == PairStrategy::kRandom ? "random" : "uncertainty"},
               {"seed", seed}};
  return j.dump(2) + "\n";
}

SimulatorConfig SimulatorConfig::from_json(const std::string& text, const std::string& name) {
  SimulatorConfig config;
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ParseError(name + ": " + e.what());
  }
  try {
    config.propositions = j.value("propositions", config.propositions);
    config.workers = j.value("workers", config.workers);
    config.noise_sigma = j.value("noise_sigma", config.noise_sigma);
    config.contrarian_fraction = j.value("contrarian_fraction", config.contrarian_fraction);
    config.pair_fraction = j.value("pair_fraction", config.pair_fraction);
    config.seed = j.value("seed", config.seed);
    const std::string strategy = j.value("strategy", "random");
    if (strategy == "random") {
      config.strategy = PairStrategy::kRandom;
    } else if (strategy == "uncertainty") {
      config.strategy = PairStrategy::kUncertainty;
    } else {
      throw ValidationError(name + ": unknown strategy '" + strategy + "'");
    }
  } catch (const json::exception& e) {
    throw ParseError(name + ": " + e.what());
  }
  return config;
}

}  // namespace cmapsum::crowd
