#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "cmapsum/types.hpp"

namespace cmapsum::crowd {

// 5-point importance rating of one proposition by one worker.
struct LikertLabel {
  std::string worker;
  std::string proposition;
  int value = 0;  // in {1..5}
};

// Pairwise outcome; the pair is normalized so a < b lexicographically.
struct ComparisonLabel {
  std::string worker;
  std::string a;
  std::string b;
  std::string winner;

  static ComparisonLabel make(std::string worker, const std::string& x, const std::string& y,
                              const std::string& winner);
};

// Gaussian skill estimate.
struct Rating {
  double mu = 25.0;
  double sigma = 25.0 / 3.0;
};

struct TrueSkillParams {
  double mu0 = 25.0;
  double sigma0 = 25.0 / 3.0;
  double beta = 25.0 / 6.0;  // sigma0 / 2
  double tau = 0.0;
  bool conservative_rank = false;  // rank by mu - 3*sigma instead of mu
};

inline constexpr std::size_t kTaskSize = 5;

enum class BatchKind { kLikert, kOrdering };

struct TaskBatch {
  std::array<std::string, kTaskSize> propositions;
  BatchKind kind = BatchKind::kLikert;
};

// Random partition into tasks of five; a final short batch is padded by
// resampling earlier items. Deterministic under the seed.
std::vector<TaskBatch> build_task_batches(const std::vector<std::string>& propositions,
                                          BatchKind kind, std::uint64_t seed);

// Arithmetic mean per proposition, in [1,5]. Duplicate (worker,
// proposition) pairs and out-of-range values are rejected.
std::map<std::string, double> aggregate_likert(const std::vector<LikertLabel>& labels);

struct WorkerReport {
  struct Entry {
    std::string worker;
    double correlation = 0.0;  // NaN when undefined
    std::size_t labels = 0;
    bool removed = false;
  };
  std::vector<Entry> entries;  // ascending by correlation
  std::size_t total_labels = 0;
  std::size_t removed_labels = 0;
};

struct WorkerFilterOptions {
  double max_removed_fraction = 0.05;
  // Workers at or above this correlation are never removed, so a
  // uniformly good crowd loses nobody.
  double min_correlation = 0.5;
};

// Per worker: Pearson correlation between their scores and the mean of
// the other workers' scores on shared propositions. Removes the worst
// correlated workers while staying within the label budget. Workers
// with undefined correlation (zero variance) count as worst.
std::pair<std::vector<LikertLabel>, WorkerReport> filter_workers(
    const std::vector<LikertLabel>& labels, const WorkerFilterOptions& opts = {});

// Expands an ordering (best first) of a batch into C(5,2) = 10
// comparisons won by the higher-ranked item.
std::vector<ComparisonLabel> ordering_to_comparisons(
    const TaskBatch& batch, const std::array<std::string, kTaskSize>& ordering,
    const std::string& worker);

// Two-player no-draw update:
//   sigma^2 += tau^2;  c^2 = 2*beta^2 + sigma_w^2 + sigma_l^2
//   t = (mu_w - mu_l)/c;  v = phi(t)/Phi(t);  w = v*(v+t)
//   mu_w += sigma_w^2/c * v;          mu_l -= sigma_l^2/c * v
//   sigma_w^2 *= 1 - sigma_w^2/c^2 * w;  sigma_l^2 *= 1 - sigma_l^2/c^2 * w
void trueskill_update(std::map<std::string, Rating>& ratings, const ComparisonLabel& label,
                      const TrueSkillParams& params = {});

enum class PairStrategy { kRandom, kUncertainty };

// Samples ceil(fraction * C(n,2)) distinct pairs. Random: uniform
// without replacement. Uncertainty: prefers pairs with the highest
// combined sigma and the smallest |mu difference|, so callers can
// interleave sampling with rating updates batch by batch.
std::vector<std::pair<std::string, std::string>> sample_pairs(
    const std::vector<std::string>& pool, double fraction, PairStrategy strategy,
    std::uint64_t seed, const std::map<std::string, Rating>* ratings = nullptr);

struct RankedProposition {
  std::string id;
  Rating rating;
  double likert_mean = 0.0;
};

struct RankingResult {
  std::vector<RankedProposition> ranking;  // best first
  std::vector<std::string> warnings;       // e.g. comparisons outside the pool
};

struct RankingOptions {
  std::size_t pool_size = 100;  // plus everything tied with the last slot
  TrueSkillParams trueskill;
};

// Two-stage protocol: top pool by Likert mean (ties with the boundary
// item included), TrueSkill replay over the comparisons in input order,
// then rank by mu (ties: higher Likert mean, then id).
RankingResult rank_propositions(const std::map<std::string, double>& likert_means,
                                const std::vector<ComparisonLabel>& comparisons,
                                const RankingOptions& opts = {});

struct AgreementResult {
  double value = 0.0;
  std::vector<std::string> warnings;
};

// Meta-worker agreement: per proposition the k labels are sorted
// descending and assigned to meta-workers 1..k; the result is the mean
// over meta-workers of Pearson(meta vector, mean of the others).
// Requires the same k >= 2 everywhere.
AgreementResult likert_agreement(const std::vector<LikertLabel>& labels);

// Mean over pairs of the fraction of workers voting with the pair's
// majority winner; split votes count 0.5. Every pair needs >= 2 labels.
double comparison_agreement(const std::vector<ComparisonLabel>& labels);

struct RunCorrelation {
  double pearson = 0.0;
  double spearman = 0.0;
};

// Correlation between two importance-estimate runs over the same
// proposition set (>= 3 propositions).
RunCorrelation compare_runs(const std::map<std::string, double>& estimates_a,
                            const std::map<std::string, double>& estimates_b);

struct PeerScore {
  double score = 0.0;
  std::vector<std::string> missing;  // ids without estimates, counted as 0
};

// Sum of the importance estimates of the contained propositions.
PeerScore peer_score(const std::set<std::string>& summary_propositions,
                     const std::map<std::string, double>& estimates);

}  // namespace cmapsum::crowd
