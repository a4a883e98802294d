#include "cmapsum/suitability.hpp"

#include <fstream>
#include <sstream>

#include "cmapsum/errors.hpp"
#include "cmapsum/linguistic.hpp"

namespace cmapsum::extraction {

namespace {

bool is_pronoun_tag(const std::string& tag) { return tag == "PRP" || tag == "WP"; }

bool pronoun_only(const Phrase& arg) {
  if (arg.empty()) return false;
  for (const auto& tok : arg.tokens) {
    if (!is_pronoun_tag(tok.pos) && tok.pos != "PRP$") return false;
  }
  return true;
}

bool pronoun_headed(const Phrase& arg) {
  if (arg.empty()) return false;
  return is_pronoun_tag(arg.tokens.back().pos);
}

bool det_only(const Phrase& arg) {
  if (arg.empty()) return false;
  for (const auto& tok : arg.tokens) {
    if (tok.pos != "DT" && tok.pos != "PRP$") return false;
  }
  return true;
}

bool finite_verb_inside(const Phrase& arg) {
  for (const auto& tok : arg.tokens) {
    if (tok.pos == "VBZ" || tok.pos == "VBD" || tok.pos == "VBP" || tok.pos == "MD") {
      return true;
    }
  }
  return false;
}

void require_tags(const Proposition& p) {
  for (const Phrase* phrase : {&p.arg1, &p.relation, &p.arg2}) {
    for (const auto& tok : phrase->tokens) {
      if (tok.pos.empty()) {
        throw ValidationError("suitability: proposition '" + p.id + "' is not POS tagged");
      }
    }
  }
}

Phrase annotated_phrase(const std::string& text) {
  Sentence sent;
  sent.tokens = ling::tokenize(text);
  ling::pos_tag(sent);
  ling::stem_tokens(sent);
  return Phrase::of(std::move(sent.tokens));
}

}  // namespace

std::vector<double> SuitabilityModel::features(const Proposition& p) {
  require_tags(p);
  return {
      p.confidence,
      static_cast<double>(p.arg1.size()),
      static_cast<double>(p.relation.size()),
      static_cast<double>(p.arg2.size()),
      (pronoun_headed(p.arg1) || pronoun_headed(p.arg2)) ? 1.0 : 0.0,
      (finite_verb_inside(p.arg1) || finite_verb_inside(p.arg2)) ? 1.0 : 0.0,
      (det_only(p.arg1) || det_only(p.arg2)) ? 1.0 : 0.0,
  };
}

const std::vector<std::string>& SuitabilityModel::feature_names() {
  static const std::vector<std::string> names = {
      "confidence",     "arg1_tokens",       "relation_tokens", "arg2_tokens",
      "pronoun_headed", "finite_verb_in_arg", "determiner_only",
  };
  return names;
}

SuitabilityModel SuitabilityModel::train(const std::vector<LabeledTuple>& tuples) {
  if (tuples.empty()) throw ValidationError("SuitabilityModel::train: no tuples");
  std::vector<std::vector<double>> rows;
  std::vector<int> labels;
  rows.reserve(tuples.size());
  for (const auto& t : tuples) {
    rows.push_back(features(t.prop));
    labels.push_back(t.suitable ? 1 : 0);
  }
  ml::TrainOptions opts;
  opts.learning_rate = 0.2;
  opts.iterations = 2000;
  opts.l2 = 1e-3;
  opts.positive_weight = kPositiveClassWeight;
  SuitabilityModel out;
  out.model_ = ml::train_logistic(rows, labels, feature_names(), opts);
  return out;
}

double SuitabilityModel::score(const Proposition& p) const {
  require_tags(p);
  if (pronoun_only(p.arg1) || pronoun_only(p.arg2)) return 0.0;
  return model_.predict(features(p));
}

SuitabilityModel SuitabilityModel::from_json(const std::string& text) {
  SuitabilityModel out;
  out.model_ = ml::LogisticModel::from_json(text, "<suitability>");
  return out;
}

std::vector<LabeledTuple> read_labeled_tuples(std::istream& in, const std::string& name) {
  std::vector<LabeledTuple> tuples;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    std::vector<std::string> cols;
    std::size_t start = 0;
    while (true) {
      const auto tab = line.find('\t', start);
      cols.push_back(line.substr(start, tab - start));
      if (tab == std::string::npos) break;
      start = tab + 1;
    }
    if (cols.size() != 5) {
      throw ParseError(name, line_no, "expected arg1, relation, arg2, confidence, label");
    }
    LabeledTuple t;
    t.prop.id = name + ":" + std::to_string(line_no);
    t.prop.arg1 = annotated_phrase(cols[0]);
    t.prop.relation = annotated_phrase(cols[1]);
    t.prop.arg2 = annotated_phrase(cols[2]);
    try {
      t.prop.confidence = std::stod(cols[3]);
    } catch (const std::exception&) {
      throw ParseError(name, line_no, "bad confidence '" + cols[3] + "'");
    }
    if (cols[4] == "suitable") {
      t.suitable = true;
    } else if (cols[4] == "unsuitable") {
      t.suitable = false;
    } else {
      throw ParseError(name, line_no, "label must be 'suitable' or 'unsuitable'");
    }
    validate(t.prop);
    tuples.push_back(std::move(t));
  }
  return tuples;
}

std::vector<LabeledTuple> load_labeled_tuples(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open labeled tuples: " + path.string());
  return read_labeled_tuples(in, path.string());
}

const SuitabilityModel& default_suitability_model() {
  static const SuitabilityModel model = [] {
    const auto path = ling::data_dir() / "suitability_tuples.tsv";
    return SuitabilityModel::train(load_labeled_tuples(path));
  }();
  return model;
}

std::vector<Proposition> filter_by_suitability(std::vector<Proposition> props,
                                               double threshold) {
  if (threshold < 0.0 || threshold > 1.0) {
    throw ValidationError("filter_by_suitability: threshold outside [0,1]");
  }
  const auto& model = default_suitability_model();
  std::vector<Proposition> kept;
  kept.reserve(props.size());
  for (auto& p : props) {
    const double s = model.score(p);
    if (s >= threshold) {
      p.suitability = s;
      kept.push_back(std::move(p));
    }
  }
  return kept;
}

}  // namespace cmapsum::extraction
