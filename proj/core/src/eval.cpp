#include "cmapsum/eval.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <sstream>

#include <json.hpp>

#include "cmapsum/errors.hpp"
#include "cmapsum/porter.hpp"

namespace cmapsum::eval {

using nlohmann::json;

PRF PRF::from_pr(double precision, double recall) {
  PRF out;
  out.precision = precision;
  out.recall = recall;
  out.f1 = precision + recall > 0.0 ? 2.0 * precision * recall / (precision + recall) : 0.0;
  return out;
}

namespace {

std::string normalize(const std::string& text) {
  std::string out;
  out.reserve(text.size());
  bool pending_space = false;
  for (char c : text) {
    if (std::isspace(static_cast<unsigned char>(c)) != 0) {
      if (!out.empty()) pending_space = true;
      continue;
    }
    if (pending_space) {
      out.push_back(' ');
      pending_space = false;
    }
    out.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  }
  return out;
}

std::vector<std::string> split_words(const std::string& text) {
  std::vector<std::string> words;
  std::istringstream in(text);
  std::string word;
  while (in >> word) words.push_back(word);
  return words;
}

std::string stemmed_string(const std::string& text) {
  std::string out;
  for (const auto& word : split_words(text)) {
    if (!out.empty()) out.push_back(' ');
    out += porter_stem(word);
  }
  return out;
}

}  // namespace

std::string proposition_string(const Proposition& p) {
  return normalize(p.arg1.label + " " + p.relation.label + " " + p.arg2.label);
}

std::string proposition_string(const ConceptMap& map, const Relation& relation) {
  const Concept* src = map.find_concept(relation.source);
  const Concept* dst = map.find_concept(relation.target);
  if (src == nullptr || dst == nullptr) {
    throw ValidationError("proposition_string: relation endpoints missing from map");
  }
  return normalize(src->label + " " + relation.label + " " + dst->label);
}

std::vector<std::string> proposition_strings(const ConceptMap& map) {
  std::vector<std::string> out;
  out.reserve(map.relations.size());
  for (const auto& rel : map.relations) {
    out.push_back(proposition_string(map, rel));
  }
  return out;
}

PRF strict_match(const ConceptMap& gen, const ConceptMap& ref,
                 std::vector<std::string>* warnings) {
  const auto gen_props = proposition_strings(gen);
  const auto ref_props = proposition_strings(ref);
  if (gen_props.empty() || ref_props.empty()) {
    if (warnings) {
      warnings->push_back("strict_match: empty proposition set, all scores zero");
    }
    return PRF{};
  }

  // Exact equality on the stemmed strings, each reference consumed at
  // most once; greedy is optimal under exact equality.
  std::map<std::string, std::size_t> available;
  for (const auto& r : ref_props) ++available[stemmed_string(r)];
  std::size_t matched = 0;
  for (const auto& g : gen_props) {
    auto it = available.find(stemmed_string(g));
    if (it != available.end() && it->second > 0) {
      --it->second;
      ++matched;
    }
  }
  return PRF::from_pr(static_cast<double>(matched) / static_cast<double>(gen_props.size()),
                      static_cast<double>(matched) / static_cast<double>(ref_props.size()));
}

PRF meteor_prf(const ConceptMap& gen, const ConceptMap& ref, const MeteorParams& params,
               std::vector<std::string>* warnings) {
  const auto gen_props = proposition_strings(gen);
  const auto ref_props = proposition_strings(ref);
  if (gen_props.empty() || ref_props.empty()) {
    if (warnings) {
      warnings->push_back("meteor_prf: empty proposition set, all scores zero");
    }
    return PRF{};
  }

  std::vector<std::vector<std::string>> gen_tokens, ref_tokens;
  for (const auto& g : gen_props) gen_tokens.push_back(split_words(g));
  for (const auto& r : ref_props) ref_tokens.push_back(split_words(r));

  // score[i][j] = METEOR(gen i as hypothesis, ref j as reference)
  double precision_sum = 0.0;
  std::vector<double> best_by_ref(ref_tokens.size(), 0.0);
  for (const auto& g : gen_tokens) {
    double best = 0.0;
    for (std::size_t j = 0; j < ref_tokens.size(); ++j) {
      const double s = meteor_score(g, ref_tokens[j], params);
      best = std::max(best, s);
      best_by_ref[j] = std::max(best_by_ref[j], s);
    }
    precision_sum += best;
  }
  double recall_sum = 0.0;
  for (double s : best_by_ref) recall_sum += s;

  return PRF::from_pr(precision_sum / static_cast<double>(gen_tokens.size()),
                      recall_sum / static_cast<double>(ref_tokens.size()));
}

PRF rouge2(const ConceptMap& gen, const ConceptMap& ref, std::vector<std::string>* warnings) {
  auto gen_props = proposition_strings(gen);
  auto ref_props = proposition_strings(ref);
  std::sort(gen_props.begin(), gen_props.end());
  std::sort(ref_props.begin(), ref_props.end());

  const auto side_bigrams = [](const std::vector<std::string>& props) {
    std::vector<std::string> stems;
    for (const auto& p : props) {
      for (const auto& word : split_words(p)) stems.push_back(porter_stem(word));
    }
    std::map<std::pair<std::string, std::string>, std::size_t> bigrams;
    for (std::size_t i = 0; i + 1 < stems.size(); ++i) {
      ++bigrams[{stems[i], stems[i + 1]}];
    }
    return bigrams;
  };

  const auto gen_bigrams = side_bigrams(gen_props);
  const auto ref_bigrams = side_bigrams(ref_props);
  std::size_t gen_total = 0, ref_total = 0;
  for (const auto& [bg, count] : gen_bigrams) gen_total += count;
  for (const auto& [bg, count] : ref_bigrams) ref_total += count;
  if (gen_total == 0 || ref_total == 0) {
    if (warnings) {
      warnings->push_back("rouge2: a side has fewer than 2 tokens, all scores zero");
    }
    return PRF{};
  }

  std::size_t overlap = 0;  // clipped counts
  for (const auto& [bigram, count] : gen_bigrams) {
    const auto it = ref_bigrams.find(bigram);
    if (it != ref_bigrams.end()) overlap += std::min(count, it->second);
  }
  return PRF::from_pr(static_cast<double>(overlap) / static_cast<double>(gen_total),
                      static_cast<double>(overlap) / static_cast<double>(ref_total));
}

namespace {

json prf_to_json(const PRF& prf) {
  return json{{"precision", prf.precision}, {"recall", prf.recall}, {"f1", prf.f1}};
}

}  // namespace

std::string EvalReport::to_json() const {
  json matches_strict = json::array();
  for (const auto& m : strict_matches) {
    matches_strict.push_back(
        json{{"generated", m.generated}, {"reference", m.reference}, {"score", m.score}});
  }
  json matches_meteor = json::array();
  for (const auto& m : meteor_matches) {
    matches_meteor.push_back(
        json{{"generated", m.generated}, {"reference", m.reference}, {"score", m.score}});
  }
  const json j{{"strict_match", prf_to_json(strict)},
               {"meteor", prf_to_json(meteor)},
               {"rouge2", prf_to_json(rouge2)},
               {"strict_matches", std::move(matches_strict)},
               {"meteor_matches", std::move(matches_meteor)},
               {"warnings", warnings}};
  return j.dump(2) + "\n";
}

EvalReport evaluate_map(const ConceptMap& gen, const ConceptMap& ref,
                        const MeteorParams& params) {
  validate_map(gen, /*summary=*/true);
  validate_map(ref, /*summary=*/true);

  EvalReport report;
  report.strict = strict_match(gen, ref, &report.warnings);
  report.meteor = meteor_prf(gen, ref, params, &report.warnings);
  report.rouge2 = eval::rouge2(gen, ref, &report.warnings);

  // Per-proposition detail: best reference per generated proposition.
  const auto gen_props = proposition_strings(gen);
  const auto ref_props = proposition_strings(ref);
  std::map<std::string, std::size_t> ref_by_stem;
  for (std::size_t j = 0; j < ref_props.size(); ++j) {
    ref_by_stem.emplace(stemmed_string(ref_props[j]), j);
  }
  for (const auto& g : gen_props) {
    MatchDetail strict_detail;
    strict_detail.generated = g;
    const auto it = ref_by_stem.find(stemmed_string(g));
    if (it != ref_by_stem.end()) {
      strict_detail.reference = ref_props[it->second];
      strict_detail.score = 1.0;
    }
    report.strict_matches.push_back(std::move(strict_detail));

    MatchDetail meteor_detail;
    meteor_detail.generated = g;
    const auto g_tokens = split_words(g);
    for (const auto& r : ref_props) {
      const double s = meteor_score(g_tokens, split_words(r), params);
      if (s > meteor_detail.score) {
        meteor_detail.score = s;
        meteor_detail.reference = r;
      }
    }
    report.meteor_matches.push_back(std::move(meteor_detail));
  }
  return report;
}

}  // namespace cmapsum::eval
