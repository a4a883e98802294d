#pragma once

#include <filesystem>
#include <vector>

#include "cmapsum/config.hpp"
#include "cmapsum/importance.hpp"
#include "cmapsum/types.hpp"

namespace cmapsum {

struct PipelineArtifacts {
  std::vector<Proposition> extracted;  // deduped raw extraction
  std::vector<Proposition> filtered;   // confidence + suitability + conjunction split
  std::vector<std::pair<Concept, double>> scored_concepts;  // descending
  ConceptMap full_graph;
  ConceptMap summary;
};

// Baseline end to end: extract -> filter -> merge -> select relations ->
// score -> subgraph. The cluster is annotated in place when needed.
// Stage failures re-throw with the stage name prefixed.
PipelineArtifacts run_pipeline(TopicCluster& cluster, const PipelineConfig& config,
                               const importance::Scorer* scorer = nullptr);

// propositions.tsv, filtered.tsv, concepts.json, map.json, map.dot
void write_artifacts(const PipelineArtifacts& artifacts,
                     const std::filesystem::path& out_dir);

}  // namespace cmapsum
