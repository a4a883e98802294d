#include "cmapsum/pipeline.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "cmapsum/corpus_io.hpp"
#include "cmapsum/errors.hpp"
#include "cmapsum/extraction.hpp"
#include "cmapsum/linguistic.hpp"
#include "cmapsum/mapbuild.hpp"
#include "cmapsum/suitability.hpp"

namespace cmapsum {

namespace {

template <class Fn>
auto stage(const char* name, Fn&& fn) {
  try {
    return fn();
  } catch (const IoError& e) {
    throw IoError(std::string("stage ") + name + ": " + e.what());
  } catch (const ValidationError& e) {
    throw ValidationError(std::string("stage ") + name + ": " + e.what());
  } catch (const std::exception& e) {
    throw std::runtime_error(std::string("stage ") + name + ": " + e.what());
  }
}

}  // namespace

PipelineArtifacts run_pipeline(TopicCluster& cluster, const PipelineConfig& config,
                               const importance::Scorer* scorer) {
  PipelineArtifacts artifacts;

  stage("extract", [&] {
    bool annotated = true;
    for (const auto& doc : cluster.documents) {
      if (!doc.tokenized()) annotated = false;
    }
    if (!annotated) ling::annotate(cluster);
    extraction::ExtractionOptions opts;
    opts.merge_of_chunks = config.merge_of_chunks;
    opts.max_relation_tokens = config.max_relation_tokens;
    artifacts.extracted = extraction::dedupe(extraction::extract_propositions(cluster, opts));
    return 0;
  });

  stage("filter", [&] {
    auto props = extraction::filter_by_confidence(artifacts.extracted,
                                                  config.confidence_threshold);
    props = extraction::filter_by_suitability(std::move(props), config.suitability_threshold);
    props = extraction::split_conjunctions(props);
    artifacts.filtered = extraction::dedupe(std::move(props));
    return 0;
  });

  std::vector<Concept> concepts;
  stage("merge", [&] {
    std::vector<Phrase> phrases;
    phrases.reserve(artifacts.filtered.size() * 2);
    for (const auto& p : artifacts.filtered) {
      phrases.push_back(p.arg1);
      phrases.push_back(p.arg2);
    }
    concepts = mapbuild::merge_concepts(phrases);
    return 0;
  });

  std::vector<Relation> relations;
  stage("relations", [&] {
    relations = mapbuild::select_relations(artifacts.filtered, concepts);
    return 0;
  });

  stage("score", [&] {
    const importance::Scorer& active = scorer ? *scorer : importance::default_scorer();
    artifacts.scored_concepts = importance::score_concepts(active, concepts, cluster);
    return 0;
  });

  stage("subgraph", [&] {
    std::vector<Concept> scored;
    std::map<std::string, double> scores;
    scored.reserve(artifacts.scored_concepts.size());
    for (const auto& [cand, score] : artifacts.scored_concepts) {
      scored.push_back(cand);
      scores[cand.id] = score;
    }
    artifacts.full_graph = mapbuild::build_graph(std::move(scored), relations);
    artifacts.full_graph.size_limit = config.size_limit;
    artifacts.summary =
        mapbuild::extract_summary_subgraph(artifacts.full_graph, scores, config.size_limit);
    validate_map(artifacts.summary, /*summary=*/true);
    return 0;
  });

  return artifacts;
}

void write_artifacts(const PipelineArtifacts& artifacts,
                     const std::filesystem::path& out_dir) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) throw IoError("cannot create output directory: " + out_dir.string());

  const auto write_file = [&](const char* name, auto&& writer) {
    std::ofstream out(out_dir / name, std::ios::binary);
    if (!out) throw IoError("cannot write " + (out_dir / name).string());
    writer(out);
  };

  write_file("propositions.tsv",
             [&](std::ostream& out) { corpus::write_propositions_tsv(artifacts.extracted, out); });
  write_file("filtered.tsv",
             [&](std::ostream& out) { corpus::write_propositions_tsv(artifacts.filtered, out); });
  write_file("concepts.json", [&](std::ostream& out) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& [cand, score] : artifacts.scored_concepts) {
      nlohmann::json forms = nlohmann::json::array();
      for (const auto& form : cand.surface_forms) forms.push_back(form);
      arr.push_back(nlohmann::json{{"id", cand.id},
                                   {"label", cand.label},
                                   {"surface_forms", std::move(forms)},
                                   {"score", score}});
    }
    out << arr.dump(2) << "\n";
  });
  write_file("map.json",
             [&](std::ostream& out) { out << corpus::map_to_json(artifacts.summary); });
  write_file("map.dot",
             [&](std::ostream& out) { out << corpus::map_to_dot(artifacts.summary); });
}

}  // namespace cmapsum
