#pragma once

#include <cstdint>
#include <filesystem>
#include <string>

#include "cmapsum/crowd.hpp"
#include "cmapsum/eval.hpp"

namespace cmapsum {

// Every tunable constant of the pipeline in one auditable place.
// Unknown keys in the JSON are rejected.
struct PipelineConfig {
  double confidence_threshold = 0.5;
  double suitability_threshold = 0.5;
  std::size_t max_relation_tokens = 10;
  bool merge_of_chunks = false;
  int size_limit = 25;
  std::uint64_t seed = 1;
  int jobs = 1;

  crowd::TrueSkillParams trueskill;

  double meteor_alpha = 0.9;
  double meteor_beta = 3.0;
  double meteor_gamma = 0.5;
  std::string synonym_file;       // optional, TSV
  std::string importance_model;   // optional path; empty = bundled default

  std::string to_json() const;
  static PipelineConfig from_json(const std::string& text,
                                  const std::string& name = "<config>");
  static PipelineConfig load(const std::filesystem::path& path);

  eval::MeteorParams meteor_params(const eval::SynonymTable* synonyms = nullptr) const;
};

}  // namespace cmapsum
