#include <cmath>

#include "cmapsum/crowd.hpp"
#include "cmapsum/errors.hpp"

namespace cmapsum::crowd {

namespace {

double normal_pdf(double x) {
  return std::exp(-0.5 * x * x) / std::sqrt(2.0 * 3.14159265358979323846);
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

// v(t) = phi(t)/Phi(t) with the asymptote -t for deep negative t.
double v_win(double t) {
  const double denom = normal_cdf(t);
  if (denom < 1e-12) return -t;
  return normal_pdf(t) / denom;
}

}  // namespace

void trueskill_update(std::map<std::string, Rating>& ratings, const ComparisonLabel& label,
                      const TrueSkillParams& params) {
  const auto wi = ratings.find(label.winner);
  const auto li = ratings.find(label.winner == label.a ? label.b : label.a);
  if (wi == ratings.end() || li == ratings.end()) {
    throw ValidationError("trueskill_update: unknown proposition id in comparison (" +
                          label.a + ", " + label.b + ")");
  }
  Rating& winner = wi->second;
  Rating& loser = li->second;

  // Dynamics noise before the update.
  double var_w = winner.sigma * winner.sigma + params.tau * params.tau;
  double var_l = loser.sigma * loser.sigma + params.tau * params.tau;

  const double c2 = 2.0 * params.beta * params.beta + var_w + var_l;
  const double c = std::sqrt(c2);
  const double t = (winner.mu - loser.mu) / c;
  const double v = v_win(t);
  double w = v * (v + t);
  if (w < 0.0) w = 0.0;
  if (w >= 1.0) w = 1.0 - 1e-12;

  winner.mu += var_w / c * v;
  loser.mu -= var_l / c * v;
  winner.sigma = std::sqrt(var_w * (1.0 - var_w / c2 * w));
  loser.sigma = std::sqrt(var_l * (1.0 - var_l / c2 * w));
}

}  // namespace cmapsum::crowd
