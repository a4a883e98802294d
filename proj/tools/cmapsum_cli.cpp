// cmapsum - concept-map summarization pipeline, crowd aggregation and
// map evaluation from the command line.

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "cmapsum/config.hpp"
#include "cmapsum/corpus.hpp"
#include "cmapsum/corpus_io.hpp"
#include "cmapsum/crowd.hpp"
#include "cmapsum/crowd_io.hpp"
#include "cmapsum/errors.hpp"
#include "cmapsum/eval.hpp"
#include "cmapsum/extraction.hpp"
#include "cmapsum/fetch.hpp"
#include "cmapsum/importance.hpp"
#include "cmapsum/linguistic.hpp"
#include "cmapsum/mapbuild.hpp"
#include "cmapsum/pipeline.hpp"
#include "cmapsum/suitability.hpp"

namespace fs = std::filesystem;
using namespace cmapsum;
using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitIo = 1;
constexpr int kExitValidation = 2;
constexpr int kExitInternal = 3;

std::string read_text_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open file: " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::ostream& open_output(std::ofstream& file, const std::string& path) {
  if (path.empty() || path == "-") return std::cout;
  file.open(path, std::ios::binary);
  if (!file) throw IoError("cannot write output file: " + path);
  return file;
}

PipelineConfig load_config(const std::string& path) {
  if (path.empty()) return PipelineConfig{};
  return PipelineConfig::load(path);
}

std::unique_ptr<importance::LogisticScorer> load_scorer(const std::string& model_path) {
  if (model_path.empty()) return nullptr;
  return std::make_unique<importance::LogisticScorer>(
      importance::LogisticScorer::from_json(read_text_file(model_path)));
}

json stats_for_topic(const fs::path& topic_path) {
  auto cluster = corpus::load_topic(topic_path);
  ling::annotate(cluster);
  const auto st = corpus::cluster_statistics(cluster);
  json j{{"topic", cluster.id},
         {"documents", st.doc_count},
         {"tokens", st.token_count},
         {"mean_doc_size", st.mean_doc_size},
         {"doc_size_std", st.doc_size_std},
         {"rel_std", st.rel_std}};
  if (cluster.documents.size() >= 2) {
    j["heterogeneity"] = corpus::topic_heterogeneity(cluster);
  }
  const auto reference = corpus::load_reference_map(topic_path);
  if (reference) {
    j["reference_concepts"] = reference->concepts.size();
    j["reference_relations"] = reference->relations.size();
  }
  return j;
}

bool is_corpus_dir(const fs::path& path) {
  if (fs::exists(path / "topic.json")) return false;
  for (const auto& entry : fs::directory_iterator(path)) {
    if (entry.is_regular_file() && entry.path().extension() == ".txt") return false;
  }
  std::size_t dirs = 0;
  for (const auto& entry : fs::directory_iterator(path)) {
    if (entry.is_directory()) ++dirs;
  }
  return dirs > 0;
}

std::vector<fs::path> topic_dirs(const fs::path& corpus_dir) {
  std::vector<fs::path> topics;
  for (const auto& entry : fs::directory_iterator(corpus_dir)) {
    if (entry.is_directory()) topics.push_back(entry.path());
  }
  std::sort(topics.begin(), topics.end());
  return topics;
}

int run_stats(const std::string& path_arg, const std::string& out_arg) {
  const fs::path path(path_arg);
  if (!fs::exists(path)) throw IoError("no such path: " + path_arg);

  json out;
  if (fs::is_directory(path) && is_corpus_dir(path)) {
    json per_topic = json::array();
    double tokens_sum = 0.0, het_sum = 0.0;
    std::size_t het_count = 0;
    for (const auto& topic : topic_dirs(path)) {
      json j = stats_for_topic(topic);
      tokens_sum += j["tokens"].get<double>();
      if (j.contains("heterogeneity")) {
        het_sum += j["heterogeneity"].get<double>();
        ++het_count;
      }
      per_topic.push_back(std::move(j));
    }
    out["topics"] = std::move(per_topic);
    const auto n = static_cast<double>(out["topics"].size());
    out["mean_cluster_tokens"] = n > 0 ? tokens_sum / n : 0.0;
    if (het_count > 0) {
      out["mean_heterogeneity"] = het_sum / static_cast<double>(het_count);
    }
  } else {
    out = stats_for_topic(path);
  }
  std::ofstream file;
  open_output(file, out_arg) << out.dump(2) << "\n";
  return kExitOk;
}

int run_extract(const std::string& topic_arg, const std::string& out_arg,
                const std::string& config_arg) {
  const auto config = load_config(config_arg);
  auto cluster = corpus::load_topic(topic_arg);
  ling::annotate(cluster);
  extraction::ExtractionOptions opts;
  opts.merge_of_chunks = config.merge_of_chunks;
  opts.max_relation_tokens = config.max_relation_tokens;
  const auto props = extraction::dedupe(extraction::extract_propositions(cluster, opts));
  std::ofstream file;
  corpus::write_propositions_tsv(props, open_output(file, out_arg));
  return kExitOk;
}

int run_filter(const std::string& in_arg, const std::string& out_arg,
               const std::string& config_arg) {
  const auto config = load_config(config_arg);
  std::ifstream in(in_arg);
  if (!in) throw IoError("cannot open propositions file: " + in_arg);
  auto props = corpus::read_propositions_tsv(in, in_arg);
  props = extraction::filter_by_confidence(std::move(props), config.confidence_threshold);
  props = extraction::filter_by_suitability(std::move(props), config.suitability_threshold);
  props = extraction::dedupe(extraction::split_conjunctions(props));
  std::ofstream file;
  corpus::write_propositions_tsv(props, open_output(file, out_arg));
  return kExitOk;
}

int run_score(const std::string& topic_arg, const std::string& props_arg,
              const std::string& out_arg, const std::string& config_arg,
              const std::string& model_arg) {
  const auto config = load_config(config_arg);
  auto cluster = corpus::load_topic(topic_arg);
  ling::annotate(cluster);

  std::vector<Proposition> props;
  if (props_arg.empty()) {
    extraction::ExtractionOptions opts;
    opts.merge_of_chunks = config.merge_of_chunks;
    opts.max_relation_tokens = config.max_relation_tokens;
    props = extraction::dedupe(extraction::extract_propositions(cluster, opts));
    props = extraction::filter_by_confidence(std::move(props), config.confidence_threshold);
    props = extraction::filter_by_suitability(std::move(props), config.suitability_threshold);
    props = extraction::dedupe(extraction::split_conjunctions(props));
  } else {
    std::ifstream in(props_arg);
    if (!in) throw IoError("cannot open propositions file: " + props_arg);
    props = corpus::read_propositions_tsv(in, props_arg);
  }

  std::vector<Phrase> phrases;
  for (const auto& p : props) {
    phrases.push_back(p.arg1);
    phrases.push_back(p.arg2);
  }
  const auto concepts = mapbuild::merge_concepts(phrases);

  const auto scorer_override = load_scorer(
      !model_arg.empty() ? model_arg : config.importance_model);
  const importance::Scorer& scorer =
      scorer_override ? static_cast<const importance::Scorer&>(*scorer_override)
                      : importance::default_scorer();
  const auto scored = importance::score_concepts(scorer, concepts, cluster);

  json arr = json::array();
  for (const auto& [cand, score] : scored) {
    json forms = json::array();
    for (const auto& form : cand.surface_forms) forms.push_back(form);
    arr.push_back(json{{"id", cand.id},
                       {"label", cand.label},
                       {"surface_forms", std::move(forms)},
                       {"score", score}});
  }
  std::ofstream file;
  open_output(file, out_arg) << arr.dump(2) << "\n";
  return kExitOk;
}

int run_build(const std::string& topic_arg, const std::string& out_dir,
              const std::string& config_arg, const std::string& model_arg) {
  const auto config = load_config(config_arg);
  auto cluster = corpus::load_topic(topic_arg);
  const auto scorer = load_scorer(!model_arg.empty() ? model_arg : config.importance_model);
  const auto artifacts = run_pipeline(cluster, config, scorer.get());
  write_artifacts(artifacts, out_dir);
  std::cout << "topic " << cluster.id << ": " << artifacts.summary.concepts.size()
            << " concepts, " << artifacts.summary.relations.size() << " relations -> "
            << out_dir << "\n";
  return kExitOk;
}

int run_evaluate(const std::string& gen_arg, const std::string& ref_arg,
                 const std::string& config_arg, const std::string& synonyms_arg) {
  const auto config = load_config(config_arg);
  const auto gen = corpus::load_map(gen_arg);
  const auto ref = corpus::load_map(ref_arg);
  eval::SynonymTable synonyms;
  const std::string synonym_path =
      !synonyms_arg.empty() ? synonyms_arg : config.synonym_file;
  if (!synonym_path.empty()) synonyms = eval::SynonymTable::load(synonym_path);
  const auto params = config.meteor_params(synonyms.empty() ? nullptr : &synonyms);
  const auto report = eval::evaluate_map(gen, ref, params);
  std::cout << report.to_json();
  return kExitOk;
}

int run_export_dot(const std::string& in_arg, const std::string& out_arg) {
  const auto map = corpus::load_map(in_arg);
  std::ofstream file;
  corpus::export_map(map, corpus::MapFormat::kDot, open_output(file, out_arg));
  return kExitOk;
}

int run_fetch(const std::string& dest_arg, const std::string& url_arg,
              const std::string& sha_arg, bool force) {
  corpus::FetchOptions options;
  if (!url_arg.empty()) options.url = url_arg;
  options.sha256 = sha_arg;
  if (!dest_arg.empty()) {
    options.dest = dest_arg;
  } else if (const char* env = std::getenv("CMAPSUM_CACHE_DIR"); env && *env) {
    options.dest = fs::path(env);
  } else {
    options.dest = fs::path("corpus_cache");
  }
  options.force = force;
  const auto result = corpus::fetch_corpus(options);
  std::cout << (result.cache_hit ? "cache hit: " : "fetched: ") << result.corpus_dir.string()
            << " (" << result.topic_count << " topics)\n";
  return kExitOk;
}

int run_crowd_aggregate(const std::string& likert_arg, const std::string& out_arg,
                        double max_removed, bool no_filter) {
  std::ifstream in(likert_arg);
  if (!in) throw IoError("cannot open likert file: " + likert_arg);
  auto labels = crowd::read_likert_csv(in, likert_arg);
  if (!no_filter) {
    crowd::WorkerFilterOptions opts;
    opts.max_removed_fraction = max_removed;
    auto [kept, report] = crowd::filter_workers(labels, opts);
    for (const auto& entry : report.entries) {
      if (entry.removed) {
        std::cerr << "[crowd] removed worker " << entry.worker << " (corr="
                  << entry.correlation << ", " << entry.labels << " labels)\n";
      }
    }
    labels = std::move(kept);
  }
  const auto means = crowd::aggregate_likert(labels);
  std::ofstream file;
  crowd::write_means_csv(means, open_output(file, out_arg));
  return kExitOk;
}

int run_crowd_rank(const std::string& likert_arg, const std::string& comparisons_arg,
                   const std::string& orderings_arg, const std::string& out_arg,
                   const std::string& config_arg) {
  const auto config = load_config(config_arg);
  std::ifstream likert_in(likert_arg);
  if (!likert_in) throw IoError("cannot open likert file: " + likert_arg);
  const auto means = crowd::aggregate_likert(crowd::read_likert_csv(likert_in, likert_arg));

  std::vector<crowd::ComparisonLabel> comparisons;
  if (!comparisons_arg.empty()) {
    std::ifstream in(comparisons_arg);
    if (!in) throw IoError("cannot open comparisons file: " + comparisons_arg);
    comparisons = crowd::read_comparisons_csv(in, comparisons_arg);
  }
  if (!orderings_arg.empty()) {
    std::ifstream in(orderings_arg);
    if (!in) throw IoError("cannot open orderings file: " + orderings_arg);
    auto expanded = crowd::read_orderings_csv(in, orderings_arg);
    comparisons.insert(comparisons.end(), expanded.begin(), expanded.end());
  }

  crowd::RankingOptions opts;
  opts.trueskill = config.trueskill;
  const auto result = crowd::rank_propositions(means, comparisons, opts);
  for (const auto& w : result.warnings) std::cerr << "[crowd] " << w << "\n";
  std::ofstream file;
  crowd::write_ranking_csv(result, open_output(file, out_arg));
  return kExitOk;
}

int run_crowd_simulate(const std::string& config_arg, const std::string& out_dir) {
  crowd::SimulatorConfig config;
  if (!config_arg.empty()) {
    config = crowd::SimulatorConfig::from_json(read_text_file(config_arg), config_arg);
  }
  const auto crowd_data = crowd::simulate_crowd(config);
  fs::create_directories(out_dir);
  {
    std::ofstream out(fs::path(out_dir) / "likert.csv");
    crowd::write_likert_csv(crowd_data.likert, out);
  }
  {
    std::ofstream out(fs::path(out_dir) / "comparisons.csv");
    crowd::write_comparisons_csv(crowd_data.comparisons, out);
  }
  {
    std::ofstream out(fs::path(out_dir) / "latent.csv");
    out << "proposition,latent\n";
    for (const auto& [id, latent] : crowd_data.latent) {
      out << id << ',' << latent << '\n';
    }
  }
  std::cout << "wrote likert.csv, comparisons.csv, latent.csv to " << out_dir << "\n";
  return kExitOk;
}

int run_crowd_agreement(const std::string& likert_arg, const std::string& comparisons_arg) {
  json out;
  if (!likert_arg.empty()) {
    std::ifstream in(likert_arg);
    if (!in) throw IoError("cannot open likert file: " + likert_arg);
    const auto result = crowd::likert_agreement(crowd::read_likert_csv(in, likert_arg));
    out["likert_agreement"] = result.value;
    for (const auto& w : result.warnings) std::cerr << "[crowd] " << w << "\n";
  }
  if (!comparisons_arg.empty()) {
    std::ifstream in(comparisons_arg);
    if (!in) throw IoError("cannot open comparisons file: " + comparisons_arg);
    out["comparison_agreement"] =
        crowd::comparison_agreement(crowd::read_comparisons_csv(in, comparisons_arg));
  }
  if (out.empty()) {
    throw ValidationError("crowd agreement: pass --likert and/or --comparisons");
  }
  std::cout << out.dump(2) << "\n";
  return kExitOk;
}

int run_train(const std::string& corpus_arg, const std::string& out_arg,
              const std::string& holdout, const std::string& config_arg) {
  const auto config = load_config(config_arg);
  std::vector<std::pair<importance::ConceptFeatures, bool>> examples;
  std::size_t topics_used = 0;
  for (const auto& topic : topic_dirs(corpus_arg)) {
    if (!holdout.empty() && topic.filename().string() == holdout) continue;
    const auto reference = corpus::load_reference_map(topic);
    if (!reference) {
      std::cerr << "[train] skipping " << topic.filename().string()
                << " (no reference map)\n";
      continue;
    }
    auto cluster = corpus::load_topic(topic);
    ling::annotate(cluster);
    extraction::ExtractionOptions opts;
    opts.merge_of_chunks = config.merge_of_chunks;
    opts.max_relation_tokens = config.max_relation_tokens;
    auto props = extraction::dedupe(extraction::extract_propositions(cluster, opts));
    props = extraction::filter_by_confidence(std::move(props), config.confidence_threshold);
    std::vector<Phrase> phrases;
    for (const auto& p : props) {
      phrases.push_back(p.arg1);
      phrases.push_back(p.arg2);
    }
    const auto concepts = mapbuild::merge_concepts(phrases);
    auto batch = importance::build_training_examples(concepts, cluster, *reference);
    examples.insert(examples.end(), batch.begin(), batch.end());
    ++topics_used;
  }
  if (examples.empty()) {
    throw ValidationError("train: no labeled examples (no topics with reference maps?)");
  }
  const auto scorer = importance::train_scorer(examples);
  std::ofstream file;
  open_output(file, out_arg) << scorer.to_json();
  std::cerr << "[train] " << topics_used << " topics, " << examples.size() << " examples\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"concept-map multi-document summarization toolkit"};
  app.require_subcommand(1);

  std::string config_path;
  app.add_option("--config", config_path, "pipeline config JSON (defaults when omitted)");

  // fetch-corpus
  auto* fetch_cmd = app.add_subcommand("fetch-corpus", "download and verify the corpus");
  std::string fetch_dest, fetch_url, fetch_sha;
  bool fetch_force = false;
  fetch_cmd->add_option("--dest", fetch_dest, "cache directory (or $CMAPSUM_CACHE_DIR)");
  fetch_cmd->add_option("--url", fetch_url, "archive URL");
  fetch_cmd->add_option("--sha256", fetch_sha, "pinned archive checksum")->required();
  fetch_cmd->add_flag("--force", fetch_force, "ignore the cache");

  // stats
  auto* stats_cmd = app.add_subcommand("stats", "cluster statistics and heterogeneity");
  std::string stats_path, stats_out;
  stats_cmd->add_option("path", stats_path, "topic or corpus directory")->required();
  stats_cmd->add_option("-o,--output", stats_out, "output file (stdout)");

  // extract
  auto* extract_cmd = app.add_subcommand("extract", "extract candidate propositions");
  std::string extract_topic, extract_out;
  extract_cmd->add_option("topic", extract_topic, "topic directory")->required();
  extract_cmd->add_option("-o,--output", extract_out, "propositions.tsv (stdout)");

  // filter
  auto* filter_cmd = app.add_subcommand("filter", "confidence + suitability filtering");
  std::string filter_in, filter_out;
  filter_cmd->add_option("-i,--input", filter_in, "propositions.tsv")->required();
  filter_cmd->add_option("-o,--output", filter_out, "filtered.tsv (stdout)");

  // score
  auto* score_cmd = app.add_subcommand("score", "score candidate concepts");
  std::string score_topic, score_props, score_out, score_model;
  score_cmd->add_option("topic", score_topic, "topic directory")->required();
  score_cmd->add_option("-i,--propositions", score_props,
                        "filtered.tsv (otherwise extract+filter internally)");
  score_cmd->add_option("-o,--output", score_out, "concepts.json (stdout)");
  score_cmd->add_option("--model", score_model, "importance model JSON");

  // build
  auto* build_cmd = app.add_subcommand("build", "run the whole pipeline for a topic");
  std::string build_topic, build_out, build_model;
  build_cmd->add_option("topic", build_topic, "topic directory")->required();
  build_cmd->add_option("-o,--output", build_out, "artifact directory")->required();
  build_cmd->add_option("--model", build_model, "importance model JSON");

  // evaluate
  auto* eval_cmd = app.add_subcommand("evaluate", "compare a map against a reference");
  std::string eval_gen, eval_ref, eval_synonyms;
  eval_cmd->add_option("--gen", eval_gen, "generated map JSON")->required();
  eval_cmd->add_option("--ref", eval_ref, "reference map JSON")->required();
  eval_cmd->add_option("--synonyms", eval_synonyms, "synonym TSV for soft matching");

  // export-dot
  auto* dot_cmd = app.add_subcommand("export-dot", "render a map as GraphViz DOT");
  std::string dot_in, dot_out;
  dot_cmd->add_option("-i,--input", dot_in, "map JSON")->required();
  dot_cmd->add_option("-o,--output", dot_out, "DOT file (stdout)");

  // train
  auto* train_cmd = app.add_subcommand("train", "train an importance model on a corpus");
  std::string train_corpus, train_out, train_holdout;
  train_cmd->add_option("corpus", train_corpus, "corpus directory")->required();
  train_cmd->add_option("-o,--output", train_out, "model JSON (stdout)");
  train_cmd->add_option("--holdout", train_holdout, "topic to exclude");

  // crowd
  auto* crowd_cmd = app.add_subcommand("crowd", "crowd-label aggregation");
  crowd_cmd->require_subcommand(1);

  auto* agg_cmd = crowd_cmd->add_subcommand("aggregate", "mean likert score per proposition");
  std::string agg_likert, agg_out;
  double agg_max_removed = 0.05;
  bool agg_no_filter = false;
  agg_cmd->add_option("--likert", agg_likert, "likert.csv")->required();
  agg_cmd->add_option("-o,--output", agg_out, "means.csv (stdout)");
  agg_cmd->add_option("--max-removed", agg_max_removed, "worker filter label budget");
  agg_cmd->add_flag("--no-filter", agg_no_filter, "skip worker quality filtering");

  auto* rank_cmd = crowd_cmd->add_subcommand("rank", "two-stage likert + trueskill ranking");
  std::string rank_likert, rank_comparisons, rank_orderings, rank_out;
  rank_cmd->add_option("--likert", rank_likert, "likert.csv")->required();
  rank_cmd->add_option("--comparisons", rank_comparisons, "comparisons.csv");
  rank_cmd->add_option("--orderings", rank_orderings, "orderings.csv");
  rank_cmd->add_option("-o,--output", rank_out, "ranking.csv (stdout)");

  auto* sim_cmd = crowd_cmd->add_subcommand("simulate", "generate synthetic crowd labels");
  std::string sim_config, sim_out;
  sim_cmd->add_option("--config", sim_config, "simulator config JSON");
  sim_cmd->add_option("--out", sim_out, "output directory")->required();

  auto* agr_cmd = crowd_cmd->add_subcommand("agreement", "inter-worker agreement");
  std::string agr_likert, agr_comparisons;
  agr_cmd->add_option("--likert", agr_likert, "likert.csv");
  agr_cmd->add_option("--comparisons", agr_comparisons, "comparisons.csv");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitValidation;
  }

  try {
    if (fetch_cmd->parsed()) return run_fetch(fetch_dest, fetch_url, fetch_sha, fetch_force);
    if (stats_cmd->parsed()) return run_stats(stats_path, stats_out);
    if (extract_cmd->parsed()) return run_extract(extract_topic, extract_out, config_path);
    if (filter_cmd->parsed()) return run_filter(filter_in, filter_out, config_path);
    if (score_cmd->parsed()) {
      return run_score(score_topic, score_props, score_out, config_path, score_model);
    }
    if (build_cmd->parsed()) return run_build(build_topic, build_out, config_path, build_model);
    if (eval_cmd->parsed()) return run_evaluate(eval_gen, eval_ref, config_path, eval_synonyms);
    if (dot_cmd->parsed()) return run_export_dot(dot_in, dot_out);
    if (train_cmd->parsed()) return run_train(train_corpus, train_out, train_holdout, config_path);
    if (crowd_cmd->parsed()) {
      if (agg_cmd->parsed()) {
        return run_crowd_aggregate(agg_likert, agg_out, agg_max_removed, agg_no_filter);
      }
      if (rank_cmd->parsed()) {
        return run_crowd_rank(rank_likert, rank_comparisons, rank_orderings, rank_out,
                              config_path);
      }
      if (sim_cmd->parsed()) return run_crowd_simulate(sim_config, sim_out);
      if (agr_cmd->parsed()) return run_crowd_agreement(agr_likert, agr_comparisons);
    }
    std::cerr << "error: no subcommand\n";
    return kExitValidation;
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIo;
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kExitInternal;
  }
}
