#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "cmapsum/logreg.hpp"
#include "cmapsum/types.hpp"

namespace cmapsum::extraction {

struct LabeledTuple {
  Proposition prop;
  bool suitable = false;
};

// TSV: arg1<TAB>relation<TAB>arg2<TAB>confidence<TAB>label with label in
// {suitable, unsuitable}. Phrases are re-annotated on read.
std::vector<LabeledTuple> read_labeled_tuples(std::istream& in,
                                              const std::string& name = "<tuples>");
std::vector<LabeledTuple> load_labeled_tuples(const std::filesystem::path& path);

// Linear scorer for whether a tuple works as a standalone proposition:
// correct-looking, meaningful without context, concept-like arguments.
// Pronoun-only arguments are forced to score 0 ahead of the model.
class SuitabilityModel {
 public:
  static constexpr double kPositiveClassWeight = 2.0;

  static std::vector<double> features(const Proposition& p);
  static const std::vector<std::string>& feature_names();

  static SuitabilityModel train(const std::vector<LabeledTuple>& tuples);

  double score(const Proposition& p) const;

  const ml::LogisticModel& model() const { return model_; }
  std::string to_json() const { return model_.to_json(); }
  static SuitabilityModel from_json(const std::string& text);

 private:
  ml::LogisticModel model_;
};

// Trained once from the bundled labeled set (data/suitability_tuples.tsv).
const SuitabilityModel& default_suitability_model();

// Convenience: default model + threshold filter, stable order. Sets
// p.suitability on the survivors.
std::vector<Proposition> filter_by_suitability(std::vector<Proposition> props,
                                               double threshold = 0.5);

}  // namespace cmapsum::extraction
