#pragma once

#include <memory>
#include <string>
#include <vector>

#include "cmapsum/logreg.hpp"
#include "cmapsum/types.hpp"

namespace cmapsum::importance {

struct ConceptFeatures {
  double first_position = 1.0;  // earliest mention offset / cluster token count
  std::size_t frequency = 0;    // stem-merged occurrences across the cluster
  std::size_t doc_frequency = 0;
  std::size_t label_length_tokens = 0;
  std::size_t label_length_chars = 0;
  double capitalization_ratio = 0.0;

  std::vector<double> to_vector() const;
  static const std::vector<std::string>& names();
};

// Precomputed stem streams for one cluster so that featurizing many
// concepts stays linear in the corpus size.
class FeaturizeContext {
 public:
  explicit FeaturizeContext(const TopicCluster& cluster);

  ConceptFeatures featurize(const Concept& cand) const;
  std::size_t token_count() const { return total_tokens_; }

 private:
  std::vector<std::vector<std::string>> doc_stems_;
  std::vector<std::size_t> doc_offsets_;
  std::size_t total_tokens_ = 0;
};

ConceptFeatures featurize(const Concept& cand, const TopicCluster& cluster);

// Score interface so other model families can slot in.
class Scorer {
 public:
  virtual ~Scorer() = default;
  virtual double score(const ConceptFeatures& features) const = 0;
};

class LogisticScorer : public Scorer {
 public:
  explicit LogisticScorer(ml::LogisticModel model) : model_(std::move(model)) {}

  double score(const ConceptFeatures& features) const override {
    return model_.predict(features.to_vector());
  }

  std::string to_json() const { return model_.to_json(); }
  static LogisticScorer from_json(const std::string& text);
  const ml::LogisticModel& model() const { return model_; }

 private:
  ml::LogisticModel model_;
};

struct ScorerTrainOptions {
  double learning_rate = 0.2;
  int iterations = 1500;
  double l2 = 1e-3;
};

// Regularized logistic regression by deterministic full-batch gradient
// descent. Throws on single-class input.
LogisticScorer train_scorer(const std::vector<std::pair<ConceptFeatures, bool>>& examples,
                            const ScorerTrainOptions& opts = {});

// Scores every concept and returns (concept, score) sorted by score
// descending; ties broken by frequency descending, then label.
std::vector<std::pair<Concept, double>> score_concepts(const Scorer& scorer,
                                                       std::vector<Concept> concepts,
                                                       const TopicCluster& cluster);

// Training-label rule for corpus experiments: a candidate is positive
// iff its stemmed, determiner-stripped label matches a reference
// concept label the same way.
bool matches_reference(const Concept& candidate, const ConceptMap& reference);

std::vector<std::pair<ConceptFeatures, bool>> build_training_examples(
    const std::vector<Concept>& candidates, const TopicCluster& cluster,
    const ConceptMap& reference);

// Scorer with weights bundled in data/default_model.json; used when no
// trained model is supplied.
const LogisticScorer& default_scorer();

}  // namespace cmapsum::importance
