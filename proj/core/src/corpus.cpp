#include "cmapsum/corpus.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

#include "cmapsum/corpus_io.hpp"
#include "cmapsum/errors.hpp"
#include "cmapsum/linguistic.hpp"
#include "cmapsum/stats.hpp"

namespace cmapsum::corpus {

namespace fs = std::filesystem;

namespace {

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open file: " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::string dirname_description(const fs::path& dir) {
  std::string name = dir.filename().string();
  if (name.empty()) name = dir.parent_path().filename().string();
  std::replace(name.begin(), name.end(), '_', ' ');
  std::replace(name.begin(), name.end(), '-', ' ');
  return name;
}

bool is_reference_file(const fs::path& p) {
  const std::string stem = p.stem().string();
  const std::string ext = p.extension().string();
  return ext == ".cmap" || (ext == ".tsv" && stem.starts_with("gold")) ||
         (ext == ".json" && stem == "reference");
}

TopicCluster load_plain_docs(const fs::path& dir) {
  if (!fs::is_directory(dir)) {
    throw IoError("not a directory: " + dir.string());
  }
  TopicCluster cluster;
  cluster.id = dir.filename().string().empty() ? dir.parent_path().filename().string()
                                               : dir.filename().string();

  std::vector<fs::path> entries;
  for (const auto& entry : fs::directory_iterator(dir)) entries.push_back(entry.path());
  std::sort(entries.begin(), entries.end());

  for (const auto& path : entries) {
    if (fs::is_directory(path)) {
      // Some layouts keep documents one level down (docs/, documents/).
      const std::string name = path.filename().string();
      if (name == "docs" || name == "documents") {
        std::vector<fs::path> inner;
        for (const auto& e : fs::directory_iterator(path)) inner.push_back(e.path());
        std::sort(inner.begin(), inner.end());
        for (const auto& p : inner) {
          if (p.extension() == ".txt") {
            cluster.documents.push_back({p.stem().string(), read_file(p), {}});
          }
        }
      }
      continue;
    }
    const std::string filename = path.filename().string();
    if (filename == "topic.txt" || filename == "description.txt") {
      std::string text = read_file(path);
      while (!text.empty() && (text.back() == '\n' || text.back() == '\r')) text.pop_back();
      cluster.description = text;
      continue;
    }
    if (is_reference_file(path) || filename == "topic.json") continue;
    if (path.extension() == ".txt") {
      cluster.documents.push_back({path.stem().string(), read_file(path), {}});
      continue;
    }
    std::cerr << "[corpus] skipping unrecognized file: " << path.string() << "\n";
  }

  if (cluster.description.empty()) cluster.description = dirname_description(dir);
  return cluster;
}

}  // namespace

TopicCluster load_topic(const fs::path& path, TopicFormat format) {
  if (!fs::exists(path)) throw IoError("topic path does not exist: " + path.string());

  fs::path dir = path;
  fs::path topic_json;
  if (fs::is_regular_file(path) && path.filename() == "topic.json") {
    topic_json = path;
    dir = path.parent_path();
  } else if (fs::is_directory(path) && fs::exists(path / "topic.json")) {
    topic_json = path / "topic.json";
  }

  if (format == TopicFormat::kAuto) {
    format = topic_json.empty() ? TopicFormat::kPlainDocs : TopicFormat::kNativeJson;
  }

  TopicCluster cluster;
  if (format == TopicFormat::kNativeJson) {
    if (topic_json.empty()) {
      throw IoError("no topic.json under " + path.string());
    }
    cluster = topic_from_json(read_file(topic_json), topic_json.string());
    // Resolve file-backed documents relative to the topic directory.
    for (auto& doc : cluster.documents) {
      if (doc.raw_text.starts_with("@file:")) {
        doc.raw_text = read_file(dir / doc.raw_text.substr(6));
      }
    }
  } else {
    cluster = load_plain_docs(dir);
  }
  validate(cluster);
  return cluster;
}

std::optional<ConceptMap> load_reference_map(const fs::path& topic_dir) {
  if (!fs::is_directory(topic_dir)) return std::nullopt;

  std::vector<fs::path> candidates;
  for (const auto& entry : fs::directory_iterator(topic_dir)) {
    if (entry.is_regular_file() && is_reference_file(entry.path())) {
      candidates.push_back(entry.path());
    }
  }
  if (candidates.empty()) return std::nullopt;
  std::sort(candidates.begin(), candidates.end());
  const fs::path& path = candidates.front();

  if (path.extension() == ".json") {
    return load_map(path);
  }

  // Proposition triples; concepts are the distinct argument labels.
  std::ifstream in(path);
  if (!in) throw IoError("cannot open reference map: " + path.string());
  ConceptMap map;
  std::map<std::string, std::string> concept_ids;  // label -> id
  const auto intern = [&](const std::string& label) -> std::string {
    auto it = concept_ids.find(label);
    if (it != concept_ids.end()) return it->second;
    std::string id = "c" + std::to_string(concept_ids.size() + 1);
    concept_ids.emplace(label, id);
    Concept c;
    c.id = id;
    c.label = label;
    c.surface_forms.insert(label);
    map.concepts.push_back(std::move(c));
    return id;
  };

  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string> cols;
    std::size_t start = 0;
    while (true) {
      const auto tab = line.find('\t', start);
      cols.push_back(line.substr(start, tab - start));
      if (tab == std::string::npos) break;
      start = tab + 1;
    }
    if (cols.size() < 3) {
      throw ParseError(path.string(), line_no, "expected arg1<TAB>relation<TAB>arg2");
    }
    Relation rel;
    rel.source = intern(cols[0]);
    rel.target = intern(cols[2]);
    rel.label = cols[1];
    map.relations.push_back(std::move(rel));
  }
  map.size_limit = std::max<int>(map.size_limit, static_cast<int>(map.concepts.size()));
  return map;
}

ClusterStatistics cluster_statistics(const TopicCluster& cluster) {
  ClusterStatistics out;
  out.doc_count = cluster.documents.size();
  std::vector<double> sizes;
  sizes.reserve(cluster.documents.size());
  for (const auto& doc : cluster.documents) {
    if (!doc.tokenized()) {
      throw ValidationError("cluster_statistics: document '" + doc.id +
                            "' is not tokenized");
    }
    sizes.push_back(static_cast<double>(doc.token_count()));
    out.token_count += doc.token_count();
  }
  out.mean_doc_size = stats::mean(sizes);
  out.doc_size_std = stats::sample_stddev(sizes);
  out.rel_std = out.mean_doc_size > 0.0 ? out.doc_size_std / out.mean_doc_size : 0.0;
  return out;
}

std::map<std::string, double> unigram_distribution(const Document& doc) {
  std::map<std::string, double> counts;
  double total = 0.0;
  for (const auto& sent : doc.sentences) {
    for (const auto& tok : sent.tokens) {
      std::string lower;
      lower.reserve(tok.text.size());
      for (char c : tok.text) {
        lower.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
      }
      counts[lower] += 1.0;
      total += 1.0;
    }
  }
  if (total > 0.0) {
    for (auto& [word, c] : counts) c /= total;
  }
  return counts;
}

double jensen_shannon_divergence(std::span<const double> p, std::span<const double> q) {
  if (p.size() != q.size()) {
    throw ValidationError("jensen_shannon_divergence: size mismatch");
  }
  double sp = 0.0, sq = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i] < 0.0 || q[i] < 0.0) {
      throw ValidationError("jensen_shannon_divergence: negative probability");
    }
    sp += p[i];
    sq += q[i];
  }
  if (std::abs(sp - 1.0) > 1e-6 || std::abs(sq - 1.0) > 1e-6) {
    throw ValidationError("jensen_shannon_divergence: inputs must sum to 1");
  }
  double jsd = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double m = 0.5 * (p[i] + q[i]);
    if (p[i] > 0.0) jsd += 0.5 * p[i] * std::log2(p[i] / m);
    if (q[i] > 0.0) jsd += 0.5 * q[i] * std::log2(q[i] / m);
  }
  // Clamp tiny negative rounding noise.
  if (jsd < 0.0 && jsd > -1e-12) jsd = 0.0;
  return jsd;
}

double topic_heterogeneity(const TopicCluster& cluster) {
  if (cluster.documents.size() < 2) {
    throw ValidationError("topic_heterogeneity: need at least 2 documents");
  }
  for (const auto& doc : cluster.documents) {
    if (!doc.tokenized()) {
      throw ValidationError("topic_heterogeneity: document '" + doc.id +
                            "' is not tokenized");
    }
  }

  // Raw lowercased counts per document.
  std::vector<std::map<std::string, double>> doc_counts;
  std::map<std::string, double> total_counts;
  std::vector<double> doc_totals;
  double grand_total = 0.0;
  for (const auto& doc : cluster.documents) {
    std::map<std::string, double> counts;
    double total = 0.0;
    for (const auto& sent : doc.sentences) {
      for (const auto& tok : sent.tokens) {
        std::string lower;
        lower.reserve(tok.text.size());
        for (char c : tok.text) {
          lower.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
        }
        counts[lower] += 1.0;
        total_counts[lower] += 1.0;
        total += 1.0;
        grand_total += 1.0;
      }
    }
    doc_totals.push_back(total);
    doc_counts.push_back(std::move(counts));
  }

  double sum = 0.0;
  for (std::size_t d = 0; d < doc_counts.size(); ++d) {
    const double rest_total = grand_total - doc_totals[d];
    if (doc_totals[d] == 0.0 || rest_total == 0.0) {
      throw ValidationError("topic_heterogeneity: empty document");
    }
    // Align vocabularies: union of words in this doc and the rest.
    std::vector<double> p, q;
    for (const auto& [word, total] : total_counts) {
      const auto it = doc_counts[d].find(word);
      const double in_doc = it == doc_counts[d].end() ? 0.0 : it->second;
      const double in_rest = total - in_doc;
      if (in_doc == 0.0 && in_rest == 0.0) continue;
      p.push_back(in_doc / doc_totals[d]);
      q.push_back(in_rest / rest_total);
    }
    sum += jensen_shannon_divergence(p, q);
  }
  return sum / static_cast<double>(doc_counts.size());
}

}  // namespace cmapsum::corpus
