#pragma once

#include <span>
#include <vector>

namespace cmapsum::stats {

double mean(std::span<const double> xs);

// Sample standard deviation (n-1 denominator); 0 for fewer than 2 values.
double sample_stddev(std::span<const double> xs);

// Pearson correlation. Returns NaN when either side has zero variance.
double pearson(std::span<const double> xs, std::span<const double> ys);

// 1-based ranks with ties assigned their average rank.
std::vector<double> average_ranks(std::span<const double> xs);

// Spearman rank correlation (average-rank ties).
double spearman(std::span<const double> xs, std::span<const double> ys);

// Kendall tau-b (tie-adjusted).
double kendall_tau(std::span<const double> xs, std::span<const double> ys);

}  // namespace cmapsum::stats
