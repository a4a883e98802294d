#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "cmapsum/errors.hpp"
#include "cmapsum/logreg.hpp"
#include "cmapsum/rng.hpp"
#include "support/helpers.hpp"

using namespace cmapsum;
using namespace cmapsum::ml;

namespace {

struct Problem {
  std::vector<std::vector<double>> rows;
  std::vector<int> labels;
};

Problem random_problem(Rng& rng, std::size_t n, std::size_t dim) {
  Problem problem;
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<double> row(dim);
    for (auto& v : row) v = rng.uniform(-2.0, 2.0);
    problem.rows.push_back(std::move(row));
    problem.labels.push_back(static_cast<int>(rng.index(2)));
  }
  // Guarantee both classes.
  problem.labels[0] = 0;
  problem.labels[n - 1] = 1;
  return problem;
}

}  // namespace

TEST_CASE("analytic gradient matches central finite differences") {
  Rng rng(2024);
  TrainOptions opts;
  opts.l2 = 0.01;
  opts.positive_weight = 1.7;
  opts.negative_weight = 1.0;
  const double h = 1e-6;

  for (int instance = 0; instance < 100; ++instance) {
    const std::size_t dim = 1 + rng.index(6);
    const auto problem = random_problem(rng, 4 + rng.index(20), dim);
    std::vector<double> weights(dim);
    for (auto& w : weights) w = rng.uniform(-1.0, 1.0);
    const double bias = rng.uniform(-1.0, 1.0);

    std::vector<double> grad;
    double grad_bias = 0.0;
    logistic_gradient(problem.rows, problem.labels, weights, bias, opts, grad, grad_bias);

    for (std::size_t f = 0; f < dim; ++f) {
      auto plus = weights, minus = weights;
      plus[f] += h;
      minus[f] -= h;
      const double numeric = (logistic_loss(problem.rows, problem.labels, plus, bias, opts) -
                              logistic_loss(problem.rows, problem.labels, minus, bias, opts)) /
                             (2.0 * h);
      const double denom = std::max({std::abs(numeric), std::abs(grad[f]), 1e-8});
      CHECK(std::abs(numeric - grad[f]) / denom < 1e-4);
    }
    const double numeric_bias =
        (logistic_loss(problem.rows, problem.labels, weights, bias + h, opts) -
         logistic_loss(problem.rows, problem.labels, weights, bias - h, opts)) /
        (2.0 * h);
    const double denom = std::max({std::abs(numeric_bias), std::abs(grad_bias), 1e-8});
    CHECK(std::abs(numeric_bias - grad_bias) / denom < 1e-4);
  }
}

TEST_CASE("training loss decreases monotonically") {
  Rng rng(99);
  const auto problem = random_problem(rng, 60, 4);
  TrainOptions opts;
  opts.learning_rate = 0.2;
  opts.iterations = 400;
  std::vector<double> trace;
  train_logistic(problem.rows, problem.labels, {"a", "b", "c", "d"}, opts, &trace);
  REQUIRE(trace.size() == 401);
  for (std::size_t i = 1; i < trace.size(); ++i) {
    CHECK(trace[i] <= trace[i - 1] + 1e-12);
  }
}

TEST_CASE("training is deterministic and rejects bad input") {
  Rng rng(5);
  const auto problem = random_problem(rng, 30, 3);
  const auto a = train_logistic(problem.rows, problem.labels, {"x", "y", "z"});
  const auto b = train_logistic(problem.rows, problem.labels, {"x", "y", "z"});
  CHECK(a.to_json() == b.to_json());

  std::vector<std::vector<double>> rows{{1.0}, {2.0}};
  CHECK_THROWS_AS(train_logistic(rows, {1, 1}, {"x"}), ValidationError);
  CHECK_THROWS_AS(train_logistic({}, {}, {"x"}), ValidationError);
}

TEST_CASE("model json round trip preserves predictions") {
  Rng rng(7);
  const auto problem = random_problem(rng, 40, 3);
  const auto model = train_logistic(problem.rows, problem.labels, {"x", "y", "z"});
  const auto restored = LogisticModel::from_json(model.to_json());
  for (const auto& row : problem.rows) {
    CHECK(model.predict(row) == doctest::Approx(restored.predict(row)).epsilon(1e-12));
  }
}
