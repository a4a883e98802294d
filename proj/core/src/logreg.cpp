#include "cmapsum/logreg.hpp"

#include <cmath>

#include <json.hpp>

#include "cmapsum/errors.hpp"

namespace cmapsum::ml {

using nlohmann::json;

double sigmoid(double z) {
  if (z >= 0.0) {
    return 1.0 / (1.0 + std::exp(-z));
  }
  const double e = std::exp(z);
  return e / (1.0 + e);
}

double LogisticModel::predict(std::span<const double> features) const {
  if (features.size() != weights.size()) {
    throw ValidationError("LogisticModel::predict: feature size mismatch");
  }
  double z = bias;
  for (std::size_t i = 0; i < features.size(); ++i) {
    z += weights[i] * (features[i] - means[i]) / scales[i];
  }
  return sigmoid(z);
}

namespace {

// Numerically safe -log(sigmoid(z)) = log(1 + e^-z).
double log1p_exp(double z) {
  if (z > 35.0) return z;
  return std::log1p(std::exp(z));
}

}  // namespace

double logistic_loss(std::span<const std::vector<double>> rows, std::span<const int> labels,
                     std::span<const double> weights, double bias, const TrainOptions& opts) {
  const std::size_t n = rows.size();
  double loss = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double z = bias;
    for (std::size_t f = 0; f < weights.size(); ++f) z += weights[f] * rows[i][f];
    const double cw = labels[i] == 1 ? opts.positive_weight : opts.negative_weight;
    // y=1: -log(sigmoid(z)) = log1p(e^-z); y=0: -log(1-sigmoid(z)) = log1p(e^z)
    loss += cw * (labels[i] == 1 ? log1p_exp(-z) : log1p_exp(z));
  }
  loss /= static_cast<double>(n);
  double reg = 0.0;
  for (double w : weights) reg += w * w;
  return loss + 0.5 * opts.l2 * reg;
}

void logistic_gradient(std::span<const std::vector<double>> rows, std::span<const int> labels,
                       std::span<const double> weights, double bias, const TrainOptions& opts,
                       std::vector<double>& grad_weights, double& grad_bias) {
  const std::size_t n = rows.size();
  grad_weights.assign(weights.size(), 0.0);
  grad_bias = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double z = bias;
    for (std::size_t f = 0; f < weights.size(); ++f) z += weights[f] * rows[i][f];
    const double cw = labels[i] == 1 ? opts.positive_weight : opts.negative_weight;
    const double err = cw * (sigmoid(z) - static_cast<double>(labels[i]));
    for (std::size_t f = 0; f < weights.size(); ++f) grad_weights[f] += err * rows[i][f];
    grad_bias += err;
  }
  for (std::size_t f = 0; f < weights.size(); ++f) {
    grad_weights[f] = grad_weights[f] / static_cast<double>(n) + opts.l2 * weights[f];
  }
  grad_bias /= static_cast<double>(n);
}

LogisticModel train_logistic(const std::vector<std::vector<double>>& rows,
                             const std::vector<int>& labels,
                             std::vector<std::string> feature_names,
                             const TrainOptions& opts, std::vector<double>* loss_trace) {
  if (rows.size() != labels.size() || rows.empty()) {
    throw ValidationError("train_logistic: rows/labels size mismatch or empty");
  }
  const std::size_t dim = rows.front().size();
  if (dim == 0 || feature_names.size() != dim) {
    throw ValidationError("train_logistic: bad feature dimension");
  }
  bool has_pos = false, has_neg = false;
  for (int y : labels) {
    if (y == 1) has_pos = true;
    else if (y == 0) has_neg = true;
    else throw ValidationError("train_logistic: labels must be 0 or 1");
  }
  if (!has_pos || !has_neg) {
    throw ValidationError("train_logistic: need at least one example of each class");
  }

  LogisticModel model;
  model.feature_names = std::move(feature_names);
  model.means.assign(dim, 0.0);
  model.scales.assign(dim, 1.0);
  const double n = static_cast<double>(rows.size());
  for (const auto& row : rows) {
    if (row.size() != dim) throw ValidationError("train_logistic: ragged feature rows");
    for (std::size_t f = 0; f < dim; ++f) model.means[f] += row[f];
  }
  for (std::size_t f = 0; f < dim; ++f) model.means[f] /= n;
  for (const auto& row : rows) {
    for (std::size_t f = 0; f < dim; ++f) {
      const double d = row[f] - model.means[f];
      model.scales[f] += d * d;  // reuse as accumulator
    }
  }
  for (std::size_t f = 0; f < dim; ++f) {
    const double var = (model.scales[f] - 1.0) / n;
    model.scales[f] = var > 1e-12 ? std::sqrt(var) : 1.0;
  }

  std::vector<std::vector<double>> z_rows(rows.size(), std::vector<double>(dim));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t f = 0; f < dim; ++f) {
      z_rows[i][f] = (rows[i][f] - model.means[f]) / model.scales[f];
    }
  }

  model.weights.assign(dim, 0.0);
  model.bias = 0.0;
  std::vector<double> grad(dim);
  double grad_bias = 0.0;
  for (int it = 0; it < opts.iterations; ++it) {
    if (loss_trace) {
      loss_trace->push_back(logistic_loss(z_rows, labels, model.weights, model.bias, opts));
    }
    logistic_gradient(z_rows, labels, model.weights, model.bias, opts, grad, grad_bias);
    for (std::size_t f = 0; f < dim; ++f) model.weights[f] -= opts.learning_rate * grad[f];
    model.bias -= opts.learning_rate * grad_bias;
  }
  if (loss_trace) {
    loss_trace->push_back(logistic_loss(z_rows, labels, model.weights, model.bias, opts));
  }
  return model;
}

std::string LogisticModel::to_json() const {
  json j{{"feature_names", feature_names},
         {"weights", weights},
         {"bias", bias},
         {"means", means},
         {"scales", scales}};
  return j.dump(2) + "\n";
}

LogisticModel LogisticModel::from_json(const std::string& text, const std::string& name) {
  LogisticModel model;
  try {
    const json j = json::parse(text);
    model.feature_names = j.at("feature_names").get<std::vector<std::string>>();
    model.weights = j.at("weights").get<std::vector<double>>();
    model.bias = j.at("bias").get<double>();
    model.means = j.at("means").get<std::vector<double>>();
    model.scales = j.at("scales").get<std::vector<double>>();
  } catch (const json::exception& e) {
    throw ParseError(name + ": " + e.what());
  }
  if (model.weights.size() != model.means.size() ||
      model.weights.size() != model.scales.size() ||
      model.weights.size() != model.feature_names.size()) {
    throw ValidationError(name + ": inconsistent model dimensions");
  }
  return model;
}

}  // namespace cmapsum::ml
