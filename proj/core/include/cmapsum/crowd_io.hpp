#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "cmapsum/crowd.hpp"

namespace cmapsum::crowd {

// likert.csv: worker,proposition,value
std::vector<LikertLabel> read_likert_csv(std::istream& in,
                                         const std::string& name = "<likert.csv>");
void write_likert_csv(const std::vector<LikertLabel>& labels, std::ostream& out);

// comparisons.csv: worker,a,b,winner
std::vector<ComparisonLabel> read_comparisons_csv(
    std::istream& in, const std::string& name = "<comparisons.csv>");
void write_comparisons_csv(const std::vector<ComparisonLabel>& labels, std::ostream& out);

// orderings.csv: worker,batch,rank1,rank2,rank3,rank4,rank5 (best first);
// each row expands into 10 pairwise comparisons.
std::vector<ComparisonLabel> read_orderings_csv(std::istream& in,
                                                const std::string& name = "<orderings.csv>");

void write_means_csv(const std::map<std::string, double>& means, std::ostream& out);
std::map<std::string, double> read_means_csv(std::istream& in,
                                             const std::string& name = "<means.csv>");
void write_ranking_csv(const RankingResult& result, std::ostream& out);

// Synthetic crowd: latent importance per proposition, Gaussian worker
// noise, an optional fraction of contrarians who invert every judgment.
struct SimulatorConfig {
  std::size_t propositions = 100;
  std::size_t workers = 5;
  double noise_sigma = 0.4;          // on the latent 1..5 scale
  double contrarian_fraction = 0.0;  // first ceil(fraction*workers) workers
  double pair_fraction = 0.1;
  PairStrategy strategy = PairStrategy::kRandom;
  std::uint64_t seed = 1;

  std::string to_json() const;
  static SimulatorConfig from_json(const std::string& text,
                                   const std::string& name = "<simulator>");
};

struct SimulatedCrowd {
  std::vector<std::string> proposition_ids;
  std::map<std::string, double> latent;  // id -> latent importance in [1,5]
  std::vector<LikertLabel> likert;
  std::vector<ComparisonLabel> comparisons;
};

SimulatedCrowd simulate_crowd(const SimulatorConfig& config);

}  // namespace cmapsum::crowd
