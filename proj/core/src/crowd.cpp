#include "cmapsum/crowd.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "cmapsum/errors.hpp"
#include "cmapsum/rng.hpp"
#include "cmapsum/stats.hpp"

namespace cmapsum::crowd {

ComparisonLabel ComparisonLabel::make(std::string worker, const std::string& x,
                                      const std::string& y, const std::string& winner) {
  if (x == y) throw ValidationError("comparison pair with identical items: " + x);
  if (winner != x && winner != y) {
    throw ValidationError("comparison winner '" + winner + "' not in pair (" + x + ", " + y +
                          ")");
  }
  ComparisonLabel label;
  label.worker = std::move(worker);
  label.a = std::min(x, y);
  label.b = std::max(x, y);
  label.winner = winner;
  return label;
}

std::vector<TaskBatch> build_task_batches(const std::vector<std::string>& propositions,
                                          BatchKind kind, std::uint64_t seed) {
  if (propositions.size() < kTaskSize) {
    throw ValidationError("build_task_batches: need at least " + std::to_string(kTaskSize) +
                          " propositions");
  }
  {
    std::set<std::string> distinct(propositions.begin(), propositions.end());
    if (distinct.size() != propositions.size()) {
      throw ValidationError("build_task_batches: duplicate proposition ids");
    }
  }
  std::vector<std::string> shuffled = propositions;
  Rng rng(seed);
  rng.shuffle(shuffled);

  std::vector<TaskBatch> batches;
  std::size_t i = 0;
  while (i + kTaskSize <= shuffled.size()) {
    TaskBatch batch;
    batch.kind = kind;
    for (std::size_t k = 0; k < kTaskSize; ++k) batch.propositions[k] = shuffled[i + k];
    batches.push_back(std::move(batch));
    i += kTaskSize;
  }
  const std::size_t rest = shuffled.size() - i;
  if (rest > 0) {
    // Pad the final batch with distinct resamples from earlier items.
    TaskBatch batch;
    batch.kind = kind;
    std::set<std::string> used;
    for (std::size_t k = 0; k < rest; ++k) {
      batch.propositions[k] = shuffled[i + k];
      used.insert(shuffled[i + k]);
    }
    for (std::size_t k = rest; k < kTaskSize; ++k) {
      std::string pick;
      do {
        pick = shuffled[rng.index(i)];
      } while (used.count(pick));
      used.insert(pick);
      batch.propositions[k] = pick;
    }
    batches.push_back(std::move(batch));
  }
  return batches;
}

namespace {

void check_likert(const std::vector<LikertLabel>& labels) {
  std::set<std::pair<std::string, std::string>> seen;
  for (const auto& label : labels) {
    if (label.value < 1 || label.value > 5) {
      throw ValidationError("likert value " + std::to_string(label.value) +
                            " outside {1..5} (worker '" + label.worker + "')");
    }
    if (!seen.emplace(label.worker, label.proposition).second) {
      throw ValidationError("duplicate likert label: worker '" + label.worker +
                            "', proposition '" + label.proposition + "'");
    }
  }
}

}  // namespace

std::map<std::string, double> aggregate_likert(const std::vector<LikertLabel>& labels) {
  check_likert(labels);
  std::map<std::string, std::pair<double, std::size_t>> sums;
  for (const auto& label : labels) {
    auto& [sum, count] = sums[label.proposition];
    sum += static_cast<double>(label.value);
    ++count;
  }
  std::map<std::string, double> means;
  for (const auto& [prop, sc] : sums) {
    means[prop] = sc.first / static_cast<double>(sc.second);
  }
  return means;
}

std::pair<std::vector<LikertLabel>, WorkerReport> filter_workers(
    const std::vector<LikertLabel>& labels, const WorkerFilterOptions& opts) {
  check_likert(labels);
  if (opts.max_removed_fraction < 0.0 || opts.max_removed_fraction > 1.0) {
    throw ValidationError("filter_workers: max_removed_fraction outside [0,1]");
  }

  // worker -> (proposition -> value), proposition -> per-worker values
  std::map<std::string, std::map<std::string, double>> by_worker;
  std::map<std::string, std::pair<double, std::size_t>> prop_totals;
  for (const auto& label : labels) {
    by_worker[label.worker][label.proposition] = static_cast<double>(label.value);
    auto& [sum, count] = prop_totals[label.proposition];
    sum += static_cast<double>(label.value);
    ++count;
  }

  const double nan = std::numeric_limits<double>::quiet_NaN();
  WorkerReport report;
  report.total_labels = labels.size();

  std::size_t scoreable = 0;
  for (const auto& [worker, values] : by_worker) {
    // Worker's scores vs the mean of the other workers on shared items.
    std::vector<double> mine, others;
    for (const auto& [prop, value] : values) {
      const auto& [sum, count] = prop_totals.at(prop);
      if (count < 2) continue;  // nobody else labeled it
      mine.push_back(value);
      others.push_back((sum - value) / static_cast<double>(count - 1));
    }
    WorkerReport::Entry entry;
    entry.worker = worker;
    entry.labels = values.size();
    if (mine.size() < 3) {
      entry.correlation = nan;  // not enough overlap to judge; kept
      report.entries.push_back(std::move(entry));
      continue;
    }
    ++scoreable;
    entry.correlation = stats::pearson(mine, others);  // NaN on zero variance
    report.entries.push_back(std::move(entry));
  }
  if (scoreable < 2) {
    throw ValidationError(
        "filter_workers: need >= 2 workers overlapping on >= 3 propositions");
  }

  // Zero-variance workers (NaN with enough overlap) sort as worst.
  std::stable_sort(report.entries.begin(), report.entries.end(),
                   [](const WorkerReport::Entry& a, const WorkerReport::Entry& b) {
                     const bool a_nan = std::isnan(a.correlation);
                     const bool b_nan = std::isnan(b.correlation);
                     if (a_nan != b_nan) return a_nan;
                     if (a_nan && b_nan) return a.worker < b.worker;
                     if (a.correlation != b.correlation) return a.correlation < b.correlation;
                     return a.worker < b.worker;
                   });

  const std::size_t budget = static_cast<std::size_t>(
      opts.max_removed_fraction * static_cast<double>(report.total_labels));
  std::set<std::string> removed;
  for (auto& entry : report.entries) {
    const auto& values = by_worker.at(entry.worker);
    const bool undefined = std::isnan(entry.correlation) && values.size() >= 3;
    const bool bad = undefined || (!std::isnan(entry.correlation) &&
                                   entry.correlation < opts.min_correlation);
    if (!bad) continue;
    if (report.removed_labels + entry.labels > budget) break;
    entry.removed = true;
    removed.insert(entry.worker);
    report.removed_labels += entry.labels;
  }

  std::vector<LikertLabel> kept;
  kept.reserve(labels.size() - report.removed_labels);
  for (const auto& label : labels) {
    if (!removed.count(label.worker)) kept.push_back(label);
  }
  return {std::move(kept), std::move(report)};
}

std::vector<ComparisonLabel> ordering_to_comparisons(
    const TaskBatch& batch, const std::array<std::string, kTaskSize>& ordering,
    const std::string& worker) {
  std::set<std::string> batch_ids(batch.propositions.begin(), batch.propositions.end());
  std::set<std::string> order_ids(ordering.begin(), ordering.end());
  if (batch_ids.size() != kTaskSize) {
    throw ValidationError("ordering_to_comparisons: batch ids are not distinct");
  }
  if (order_ids != batch_ids) {
    throw ValidationError("ordering_to_comparisons: ordering is not a permutation of the batch");
  }
  std::vector<ComparisonLabel> out;
  out.reserve(kTaskSize * (kTaskSize - 1) / 2);
  for (std::size_t i = 0; i < kTaskSize; ++i) {
    for (std::size_t j = i + 1; j < kTaskSize; ++j) {
      out.push_back(ComparisonLabel::make(worker, ordering[i], ordering[j], ordering[i]));
    }
  }
  return out;
}

std::vector<std::pair<std::string, std::string>> sample_pairs(
    const std::vector<std::string>& pool, double fraction, PairStrategy strategy,
    std::uint64_t seed, const std::map<std::string, Rating>* ratings) {
  if (pool.size() < 2) throw ValidationError("sample_pairs: pool must hold >= 2 items");
  if (fraction <= 0.0 || fraction > 1.0) {
    throw ValidationError("sample_pairs: fraction must lie in (0,1]");
  }
  std::vector<std::pair<std::string, std::string>> pairs;
  pairs.reserve(pool.size() * (pool.size() - 1) / 2);
  for (std::size_t i = 0; i < pool.size(); ++i) {
    for (std::size_t j = i + 1; j < pool.size(); ++j) {
      pairs.emplace_back(std::min(pool[i], pool[j]), std::max(pool[i], pool[j]));
    }
  }
  const std::size_t want = static_cast<std::size_t>(
      std::ceil(fraction * static_cast<double>(pairs.size())));

  if (strategy == PairStrategy::kRandom) {
    Rng rng(seed);
    rng.shuffle(pairs);
    pairs.resize(std::min(want, pairs.size()));
    return pairs;
  }

  // Uncertainty: widest combined sigma first, then closest mus.
  const auto rating_of = [&](const std::string& id) -> Rating {
    if (ratings) {
      if (auto it = ratings->find(id); it != ratings->end()) return it->second;
    }
    return Rating{};
  };
  std::stable_sort(pairs.begin(), pairs.end(), [&](const auto& x, const auto& y) {
    const Rating xa = rating_of(x.first), xb = rating_of(x.second);
    const Rating ya = rating_of(y.first), yb = rating_of(y.second);
    const double unc_x = xa.sigma * xa.sigma + xb.sigma * xb.sigma;
    const double unc_y = ya.sigma * ya.sigma + yb.sigma * yb.sigma;
    if (unc_x != unc_y) return unc_x > unc_y;
    const double gap_x = std::abs(xa.mu - xb.mu);
    const double gap_y = std::abs(ya.mu - yb.mu);
    if (gap_x != gap_y) return gap_x < gap_y;
    return x < y;
  });
  pairs.resize(std::min(want, pairs.size()));
  return pairs;
}

RankingResult rank_propositions(const std::map<std::string, double>& likert_means,
                                const std::vector<ComparisonLabel>& comparisons,
                                const RankingOptions& opts) {
  if (likert_means.empty()) {
    throw ValidationError("rank_propositions: no likert means supplied");
  }

  // Pool: top N by mean, including everything tied with the Nth.
  std::vector<std::pair<std::string, double>> by_mean(likert_means.begin(),
                                                      likert_means.end());
  std::sort(by_mean.begin(), by_mean.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });
  std::size_t pool_end = std::min(opts.pool_size, by_mean.size());
  while (pool_end < by_mean.size() &&
         by_mean[pool_end].second == by_mean[pool_end - 1].second) {
    ++pool_end;
  }

  std::map<std::string, Rating> ratings;
  for (std::size_t i = 0; i < pool_end; ++i) {
    ratings[by_mean[i].first] = Rating{opts.trueskill.mu0, opts.trueskill.sigma0};
  }

  RankingResult result;
  std::size_t skipped = 0;
  for (const auto& label : comparisons) {
    if (!ratings.count(label.a) || !ratings.count(label.b)) {
      ++skipped;
      continue;
    }
    trueskill_update(ratings, label, opts.trueskill);
  }
  if (skipped > 0) {
    result.warnings.push_back("ignored " + std::to_string(skipped) +
                              " comparison(s) referencing propositions outside the pool");
  }

  for (std::size_t i = 0; i < pool_end; ++i) {
    RankedProposition rp;
    rp.id = by_mean[i].first;
    rp.rating = ratings.at(rp.id);
    rp.likert_mean = by_mean[i].second;
    result.ranking.push_back(std::move(rp));
  }
  const bool conservative = opts.trueskill.conservative_rank;
  std::sort(result.ranking.begin(), result.ranking.end(),
            [conservative](const RankedProposition& a, const RankedProposition& b) {
              const double ka = conservative ? a.rating.mu - 3.0 * a.rating.sigma : a.rating.mu;
              const double kb = conservative ? b.rating.mu - 3.0 * b.rating.sigma : b.rating.mu;
              if (ka != kb) return ka > kb;
              if (a.likert_mean != b.likert_mean) return a.likert_mean > b.likert_mean;
              return a.id < b.id;
            });
  return result;
}

AgreementResult likert_agreement(const std::vector<LikertLabel>& labels) {
  check_likert(labels);
  std::map<std::string, std::vector<double>> per_prop;
  for (const auto& label : labels) {
    per_prop[label.proposition].push_back(static_cast<double>(label.value));
  }
  if (per_prop.empty()) throw ValidationError("likert_agreement: no labels");

  const std::size_t k = per_prop.begin()->second.size();
  if (k < 2) throw ValidationError("likert_agreement: need >= 2 labels per proposition");
  for (const auto& [prop, values] : per_prop) {
    if (values.size() != k) {
      throw ValidationError("likert_agreement: proposition '" + prop + "' has " +
                            std::to_string(values.size()) + " labels, expected " +
                            std::to_string(k));
    }
  }

  // Meta-worker m holds the m-th highest label of every proposition.
  std::vector<std::vector<double>> meta(k);
  for (auto& [prop, values] : per_prop) {
    std::sort(values.begin(), values.end(), std::greater<>());
    for (std::size_t m = 0; m < k; ++m) meta[m].push_back(values[m]);
  }

  AgreementResult result;
  double sum = 0.0;
  std::size_t used = 0;
  for (std::size_t m = 0; m < k; ++m) {
    std::vector<double> others(meta[m].size(), 0.0);
    for (std::size_t o = 0; o < k; ++o) {
      if (o == m) continue;
      for (std::size_t i = 0; i < others.size(); ++i) others[i] += meta[o][i];
    }
    for (double& v : others) v /= static_cast<double>(k - 1);
    const double r = stats::pearson(meta[m], others);
    if (std::isnan(r)) {
      result.warnings.push_back("meta-worker " + std::to_string(m + 1) +
                                " excluded (zero variance)");
      continue;
    }
    sum += r;
    ++used;
  }
  if (used == 0) {
    throw ValidationError("likert_agreement: no meta-worker with variance");
  }
  result.value = sum / static_cast<double>(used);
  return result;
}

double comparison_agreement(const std::vector<ComparisonLabel>& labels) {
  std::map<std::pair<std::string, std::string>, std::pair<std::size_t, std::size_t>> votes;
  for (const auto& label : labels) {
    auto& [for_a, for_b] = votes[{label.a, label.b}];
    if (label.winner == label.a) {
      ++for_a;
    } else {
      ++for_b;
    }
  }
  if (votes.empty()) return 0.0;
  double sum = 0.0;
  for (const auto& [pair, tally] : votes) {
    const std::size_t total = tally.first + tally.second;
    if (total < 2) {
      throw ValidationError("comparison_agreement: pair (" + pair.first + ", " + pair.second +
                            ") labeled by fewer than 2 workers");
    }
    if (tally.first == tally.second) {
      sum += 0.5;
    } else {
      sum += static_cast<double>(std::max(tally.first, tally.second)) /
             static_cast<double>(total);
    }
  }
  return sum / static_cast<double>(votes.size());
}

RunCorrelation compare_runs(const std::map<std::string, double>& estimates_a,
                            const std::map<std::string, double>& estimates_b) {
  if (estimates_a.size() != estimates_b.size()) {
    throw ValidationError("compare_runs: proposition sets differ in size");
  }
  std::vector<double> xs, ys;
  xs.reserve(estimates_a.size());
  for (const auto& [id, value] : estimates_a) {
    const auto it = estimates_b.find(id);
    if (it == estimates_b.end()) {
      throw ValidationError("compare_runs: proposition '" + id + "' missing from second run");
    }
    xs.push_back(value);
    ys.push_back(it->second);
  }
  if (xs.size() < 3) {
    throw ValidationError("compare_runs: need >= 3 shared propositions");
  }
  return {stats::pearson(xs, ys), stats::spearman(xs, ys)};
}

PeerScore peer_score(const std::set<std::string>& summary_propositions,
                     const std::map<std::string, double>& estimates) {
  PeerScore out;
  for (const auto& id : summary_propositions) {
    const auto it = estimates.find(id);
    if (it == estimates.end()) {
      out.missing.push_back(id);
      continue;
    }
    out.score += it->second;
  }
  return out;
}

}  // namespace cmapsum::crowd
