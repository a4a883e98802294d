#pragma once

#include <span>
#include <string>
#include <vector>

namespace cmapsum::ml {

double sigmoid(double z);

struct TrainOptions {
  double learning_rate = 0.2;
  int iterations = 1500;
  double l2 = 1e-3;             // applied to weights, not the bias
  double positive_weight = 1.0;  // per-class loss weights
  double negative_weight = 1.0;
};

// Logistic regression with z-score feature standardization folded into
// the model (means/scales are serialized alongside the weights).
struct LogisticModel {
  std::vector<std::string> feature_names;
  std::vector<double> weights;  // over standardized features
  double bias = 0.0;
  std::vector<double> means;
  std::vector<double> scales;

  double predict(std::span<const double> features) const;

  std::string to_json() const;
  static LogisticModel from_json(const std::string& text,
                                 const std::string& name = "<model>");
};

// Class-weighted logistic loss with L2 on the weights, over already
// standardized rows. Exposed so tests can run finite-difference
// gradient checks against logistic_gradient.
double logistic_loss(std::span<const std::vector<double>> rows, std::span<const int> labels,
                     std::span<const double> weights, double bias, const TrainOptions& opts);

void logistic_gradient(std::span<const std::vector<double>> rows, std::span<const int> labels,
                       std::span<const double> weights, double bias, const TrainOptions& opts,
                       std::vector<double>& grad_weights, double& grad_bias);

// Deterministic full-batch gradient descent from a zero initialization.
// Requires at least one example of each class.
LogisticModel train_logistic(const std::vector<std::vector<double>>& rows,
                             const std::vector<int>& labels,
                             std::vector<std::string> feature_names,
                             const TrainOptions& opts = {},
                             std::vector<double>* loss_trace = nullptr);

}  // namespace cmapsum::ml
