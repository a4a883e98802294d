#include <algorithm>
#include <cmath>

#include "cmapsum/crowd_io.hpp"
#include "cmapsum/errors.hpp"
#include "cmapsum/rng.hpp"

namespace cmapsum::crowd {

namespace {

int clamp_likert(double v) {
  const int rounded = static_cast<int>(std::lround(v));
  return std::clamp(rounded, 1, 5);
}

}  // namespace

SimulatedCrowd simulate_crowd(const SimulatorConfig& config) {
  if (config.propositions < 2) {
    throw ValidationError("simulate_crowd: need at least 2 propositions");
  }
  if (config.workers < 1) throw ValidationError("simulate_crowd: need at least 1 worker");
  if (config.noise_sigma < 0.0) throw ValidationError("simulate_crowd: negative noise sigma");
  if (config.contrarian_fraction < 0.0 || config.contrarian_fraction > 1.0) {
    throw ValidationError("simulate_crowd: contrarian fraction outside [0,1]");
  }

  Rng rng(config.seed);
  SimulatedCrowd crowd;

  const int width = static_cast<int>(std::to_string(config.propositions).size());
  for (std::size_t i = 0; i < config.propositions; ++i) {
    std::string id = std::to_string(i + 1);
    id.insert(0, static_cast<std::size_t>(width) - id.size(), '0');
    id = "p" + id;
    crowd.proposition_ids.push_back(id);
    crowd.latent[id] = rng.uniform(1.0, 5.0);
  }

  const std::size_t contrarians = static_cast<std::size_t>(
      std::ceil(config.contrarian_fraction * static_cast<double>(config.workers)));

  // Likert labels: every worker rates every proposition.
  for (std::size_t w = 0; w < config.workers; ++w) {
    const std::string worker = "w" + std::to_string(w + 1);
    const bool contrarian = w < contrarians;
    for (const auto& id : crowd.proposition_ids) {
      const double perceived = crowd.latent[id] + rng.normal(0.0, config.noise_sigma);
      int value = clamp_likert(perceived);
      if (contrarian) value = 6 - value;
      crowd.likert.push_back({worker, id, value});
    }
  }

  // Comparison labels over a sampled set of pairs.
  const auto pairs = sample_pairs(crowd.proposition_ids, config.pair_fraction,
                                  config.strategy, config.seed + 1);
  for (const auto& [a, b] : pairs) {
    for (std::size_t w = 0; w < config.workers; ++w) {
      const std::string worker = "w" + std::to_string(w + 1);
      const bool contrarian = w < contrarians;
      const double pa = crowd.latent[a] + rng.normal(0.0, config.noise_sigma);
      const double pb = crowd.latent[b] + rng.normal(0.0, config.noise_sigma);
      bool a_wins = pa > pb || (pa == pb && a < b);
      if (contrarian) a_wins = !a_wins;
      crowd.comparisons.push_back(ComparisonLabel::make(worker, a, b, a_wins ? a : b));
    }
  }
  return crowd;
}

}  // namespace cmapsum::crowd
