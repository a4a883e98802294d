#pragma once

#include <filesystem>
#include <map>
#include <span>
#include <string>

#include "cmapsum/types.hpp"

namespace cmapsum::corpus {

enum class TopicFormat {
  kNativeJson,  // directory with topic.json (or a path to it)
  kPlainDocs,   // directory of *.txt files, tolerant released-corpus layout
  kAuto,        // kNativeJson when topic.json exists, else kPlainDocs
};

// Loads a topic cluster from disk. Documents are raw text only; run
// ling::annotate before computing statistics or extracting.
TopicCluster load_topic(const std::filesystem::path& path,
                        TopicFormat format = TopicFormat::kAuto);

// Reference summary map stored alongside a topic, if any. Recognizes
// reference.json (native format) and *.cmap / gold.tsv proposition
// triples (arg1<TAB>relation<TAB>arg2 per line).
std::optional<ConceptMap> load_reference_map(const std::filesystem::path& topic_dir);

struct ClusterStatistics {
  std::size_t token_count = 0;
  std::size_t doc_count = 0;
  double mean_doc_size = 0.0;
  double doc_size_std = 0.0;  // sample standard deviation (n-1)
  double rel_std = 0.0;       // doc_size_std / mean_doc_size
};

ClusterStatistics cluster_statistics(const TopicCluster& cluster);

// Jensen-Shannon divergence, log base 2, over two aligned probability
// vectors. Symmetric, bounded in [0,1], zero iff the inputs are equal.
double jensen_shannon_divergence(std::span<const double> p, std::span<const double> q);

// Mean over documents of the JSD between one document's unigram
// distribution (lowercased token texts) and the pooled distribution of
// the remaining documents. Requires >= 2 tokenized documents.
double topic_heterogeneity(const TopicCluster& cluster);

// Lowercased unigram relative frequencies of a token stream.
std::map<std::string, double> unigram_distribution(const Document& doc);

}  // namespace cmapsum::corpus
