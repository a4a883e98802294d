#include "cmapsum/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "cmapsum/errors.hpp"

namespace cmapsum {

using nlohmann::json;

std::string PipelineConfig::to_json() const {
  const json j{
      {"confidence_threshold", confidence_threshold},
      {"suitability_threshold", suitability_threshold},
      {"max_relation_tokens", max_relation_tokens},
      {"merge_of_chunks", merge_of_chunks},
      {"size_limit", size_limit},
      {"seed", seed},
      {"jobs", jobs},
      {"trueskill",
       json{{"mu0", trueskill.mu0},
            {"sigma0", trueskill.sigma0},
            {"beta", trueskill.beta},
            {"tau", trueskill.tau},
            {"conservative_rank", trueskill.conservative_rank}}},
      {"meteor",
       json{{"alpha", meteor_alpha}, {"beta", meteor_beta}, {"gamma", meteor_gamma}}},
      {"synonym_file", synonym_file},
      {"importance_model", importance_model},
  };
  return j.dump(2) + "\n";
}

PipelineConfig PipelineConfig::from_json(const std::string& text, const std::string& name) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ParseError(name + ": " + e.what());
  }

  static const std::set<std::string> known = {
      "confidence_threshold", "suitability_threshold", "max_relation_tokens",
      "merge_of_chunks",      "size_limit",            "seed",
      "jobs",                 "trueskill",             "meteor",
      "synonym_file",         "importance_model",
  };
  for (const auto& [key, value] : j.items()) {
    if (!known.count(key)) {
      throw ValidationError(name + ": unknown config key '" + key + "'");
    }
  }

  PipelineConfig config;
  try {
    config.confidence_threshold = j.value("confidence_threshold", config.confidence_threshold);
    config.suitability_threshold =
        j.value("suitability_threshold", config.suitability_threshold);
    config.max_relation_tokens = j.value("max_relation_tokens", config.max_relation_tokens);
    config.merge_of_chunks = j.value("merge_of_chunks", config.merge_of_chunks);
    config.size_limit = j.value("size_limit", config.size_limit);
    config.seed = j.value("seed", config.seed);
    config.jobs = j.value("jobs", config.jobs);
    if (j.contains("trueskill")) {
      const auto& ts = j.at("trueskill");
      static const std::set<std::string> ts_known = {"mu0", "sigma0", "beta", "tau",
                                                     "conservative_rank"};
      for (const auto& [key, value] : ts.items()) {
        if (!ts_known.count(key)) {
          throw ValidationError(name + ": unknown trueskill key '" + key + "'");
        }
      }
      config.trueskill.mu0 = ts.value("mu0", config.trueskill.mu0);
      config.trueskill.sigma0 = ts.value("sigma0", config.trueskill.sigma0);
      config.trueskill.beta = ts.value("beta", config.trueskill.beta);
      config.trueskill.tau = ts.value("tau", config.trueskill.tau);
      config.trueskill.conservative_rank =
          ts.value("conservative_rank", config.trueskill.conservative_rank);
    }
    if (j.contains("meteor")) {
      const auto& mt = j.at("meteor");
      static const std::set<std::string> mt_known = {"alpha", "beta", "gamma"};
      for (const auto& [key, value] : mt.items()) {
        if (!mt_known.count(key)) {
          throw ValidationError(name + ": unknown meteor key '" + key + "'");
        }
      }
      config.meteor_alpha = mt.value("alpha", config.meteor_alpha);
      config.meteor_beta = mt.value("beta", config.meteor_beta);
      config.meteor_gamma = mt.value("gamma", config.meteor_gamma);
    }
    config.synonym_file = j.value("synonym_file", config.synonym_file);
    config.importance_model = j.value("importance_model", config.importance_model);
  } catch (const json::exception& e) {
    throw ParseError(name + ": " + e.what());
  }

  if (config.confidence_threshold < 0.0 || config.confidence_threshold > 1.0 ||
      config.suitability_threshold < 0.0 || config.suitability_threshold > 1.0) {
    throw ValidationError(name + ": thresholds must lie in [0,1]");
  }
  if (config.size_limit < 1) throw ValidationError(name + ": size_limit must be >= 1");
  if (config.jobs < 1) throw ValidationError(name + ": jobs must be >= 1");
  if (config.trueskill.sigma0 <= 0.0 || config.trueskill.beta <= 0.0 ||
      config.trueskill.tau < 0.0) {
    throw ValidationError(name + ": invalid trueskill parameters");
  }
  return config;
}

PipelineConfig PipelineConfig::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file: " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return from_json(buf.str(), path.string());
}

eval::MeteorParams PipelineConfig::meteor_params(const eval::SynonymTable* synonyms) const {
  eval::MeteorParams params;
  params.alpha = meteor_alpha;
  params.beta = meteor_beta;
  params.gamma = meteor_gamma;
  params.synonyms = synonyms;
  return params;
}

}  // namespace cmapsum
