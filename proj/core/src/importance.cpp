#include "cmapsum/importance.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

#include "cmapsum/errors.hpp"
#include "cmapsum/linguistic.hpp"
#include "cmapsum/mapbuild.hpp"
#include "cmapsum/porter.hpp"

namespace cmapsum::importance {

std::vector<double> ConceptFeatures::to_vector() const {
  return {first_position,
          static_cast<double>(frequency),
          static_cast<double>(doc_frequency),
          static_cast<double>(label_length_tokens),
          static_cast<double>(label_length_chars),
          capitalization_ratio};
}

const std::vector<std::string>& ConceptFeatures::names() {
  static const std::vector<std::string> names = {
      "first_position",      "frequency",          "doc_frequency",
      "label_length_tokens", "label_length_chars", "capitalization_ratio",
  };
  return names;
}

FeaturizeContext::FeaturizeContext(const TopicCluster& cluster) {
  std::size_t offset = 0;
  for (const auto& doc : cluster.documents) {
    if (!doc.tokenized()) {
      throw ValidationError("featurize: document '" + doc.id + "' is not tokenized");
    }
    std::vector<std::string> stems;
    stems.reserve(doc.token_count());
    for (const auto& sent : doc.sentences) {
      for (const auto& tok : sent.tokens) {
        stems.push_back(tok.stem.empty() ? porter_stem(tok.text) : tok.stem);
      }
    }
    doc_offsets_.push_back(offset);
    offset += stems.size();
    doc_stems_.push_back(std::move(stems));
  }
  total_tokens_ = offset;
}

namespace {

std::vector<std::string> stem_sequence(const std::string& label) {
  std::vector<std::string> stems;
  for (const auto& tok : ling::tokenize(label)) {
    stems.push_back(porter_stem(tok.text));
  }
  return stems;
}

}  // namespace

ConceptFeatures FeaturizeContext::featurize(const Concept& cand) const {
  ConceptFeatures out;

  const auto label_tokens = ling::tokenize(cand.label);
  out.label_length_tokens = label_tokens.size();
  out.label_length_chars = cand.label.size();
  std::size_t caps = 0;
  for (const auto& tok : label_tokens) {
    if (!tok.text.empty() && std::isupper(static_cast<unsigned char>(tok.text[0])) != 0) {
      ++caps;
    }
  }
  out.capitalization_ratio =
      label_tokens.empty() ? 0.0
                           : static_cast<double>(caps) / static_cast<double>(label_tokens.size());

  // Distinct stemmed surface-form sequences, so "loan" and "loans"
  // count each occurrence once.
  std::vector<std::vector<std::string>> needles;
  for (const auto& form : cand.surface_forms) {
    auto stems = stem_sequence(form);
    if (stems.empty()) continue;
    if (std::find(needles.begin(), needles.end(), stems) == needles.end()) {
      needles.push_back(std::move(stems));
    }
  }

  std::size_t earliest = total_tokens_;
  for (std::size_t d = 0; d < doc_stems_.size(); ++d) {
    const auto& hay = doc_stems_[d];
    bool in_doc = false;
    for (const auto& needle : needles) {
      if (needle.size() > hay.size()) continue;
      for (std::size_t i = 0; i + needle.size() <= hay.size(); ++i) {
        bool hit = true;
        for (std::size_t k = 0; k < needle.size(); ++k) {
          if (hay[i + k] != needle[k]) {
            hit = false;
            break;
          }
        }
        if (hit) {
          ++out.frequency;
          in_doc = true;
          earliest = std::min(earliest, doc_offsets_[d] + i);
        }
      }
    }
    if (in_doc) ++out.doc_frequency;
  }

  out.first_position = (out.frequency == 0 || total_tokens_ == 0)
                           ? 1.0
                           : static_cast<double>(earliest) / static_cast<double>(total_tokens_);
  return out;
}

ConceptFeatures featurize(const Concept& cand, const TopicCluster& cluster) {
  return FeaturizeContext(cluster).featurize(cand);
}

LogisticScorer LogisticScorer::from_json(const std::string& text) {
  return LogisticScorer(ml::LogisticModel::from_json(text, "<scorer>"));
}

LogisticScorer train_scorer(const std::vector<std::pair<ConceptFeatures, bool>>& examples,
                            const ScorerTrainOptions& opts) {
  std::vector<std::vector<double>> rows;
  std::vector<int> labels;
  rows.reserve(examples.size());
  for (const auto& [features, positive] : examples) {
    rows.push_back(features.to_vector());
    labels.push_back(positive ? 1 : 0);
  }
  ml::TrainOptions train_opts;
  train_opts.learning_rate = opts.learning_rate;
  train_opts.iterations = opts.iterations;
  train_opts.l2 = opts.l2;
  return LogisticScorer(
      ml::train_logistic(rows, labels, ConceptFeatures::names(), train_opts));
}

std::vector<std::pair<Concept, double>> score_concepts(const Scorer& scorer,
                                                       std::vector<Concept> concepts,
                                                       const TopicCluster& cluster) {
  const FeaturizeContext ctx(cluster);
  struct Row {
    Concept cand;
    double score;
    std::size_t frequency;
  };
  std::vector<Row> rows;
  rows.reserve(concepts.size());
  for (auto& c : concepts) {
    const auto features = ctx.featurize(c);
    const double s = scorer.score(features);
    c.score = s;
    rows.push_back({std::move(c), s, features.frequency});
  }
  std::sort(rows.begin(), rows.end(), [](const Row& a, const Row& b) {
    if (a.score != b.score) return a.score > b.score;
    if (a.frequency != b.frequency) return a.frequency > b.frequency;
    return a.cand.label < b.cand.label;
  });
  std::vector<std::pair<Concept, double>> out;
  out.reserve(rows.size());
  for (auto& row : rows) out.emplace_back(std::move(row.cand), row.score);
  return out;
}

bool matches_reference(const Concept& candidate, const ConceptMap& reference) {
  const std::string key = mapbuild::concept_key(candidate.label);
  for (const auto& ref : reference.concepts) {
    if (mapbuild::concept_key(ref.label) == key) return true;
  }
  return false;
}

std::vector<std::pair<ConceptFeatures, bool>> build_training_examples(
    const std::vector<Concept>& candidates, const TopicCluster& cluster,
    const ConceptMap& reference) {
  const FeaturizeContext ctx(cluster);
  std::vector<std::pair<ConceptFeatures, bool>> out;
  out.reserve(candidates.size());
  for (const auto& c : candidates) {
    out.emplace_back(ctx.featurize(c), matches_reference(c, reference));
  }
  return out;
}

const LogisticScorer& default_scorer() {
  static const LogisticScorer scorer = [] {
    const auto path = ling::data_dir() / "default_model.json";
    std::ifstream in(path);
    if (!in) throw IoError("cannot open default importance model: " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return LogisticScorer::from_json(buf.str());
  }();
  return scorer;
}

}  // namespace cmapsum::importance
