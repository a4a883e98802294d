#include "cmapsum/corpus_io.hpp"

#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "cmapsum/corpus.hpp"
#include "cmapsum/errors.hpp"
#include "cmapsum/linguistic.hpp"

namespace cmapsum::corpus {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

std::string dot_escape(const std::string& s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) {
    if (c == '"' || c == '\\') out.push_back('\\');
    out.push_back(c);
  }
  return out;
}

json provenance_to_json(const Provenance& p) {
  return json{{"document", p.document_id}, {"sentence", p.sentence_index}};
}

Provenance provenance_from_json(const json& j) {
  Provenance p;
  p.document_id = j.value("document", "");
  p.sentence_index = j.value("sentence", std::size_t{0});
  return p;
}

json map_to_json_value(const ConceptMap& map) {
  json concepts = json::array();
  for (const auto& c : map.concepts) {
    json jc{{"id", c.id}, {"label", c.label}, {"score", c.score}};
    jc["surface_forms"] = json::array();
    for (const auto& form : c.surface_forms) jc["surface_forms"].push_back(form);
    concepts.push_back(std::move(jc));
  }
  json relations = json::array();
  for (const auto& r : map.relations) {
    json jr{{"source", r.source}, {"target", r.target}, {"label", r.label}};
    if (!r.provenance.document_id.empty() || r.provenance.sentence_index != 0) {
      jr["provenance"] = provenance_to_json(r.provenance);
    }
    relations.push_back(std::move(jr));
  }
  return json{{"size_limit", map.size_limit},
              {"concepts", std::move(concepts)},
              {"relations", std::move(relations)}};
}

ConceptMap map_from_json_value(const json& j, const std::string& name) {
  ConceptMap map;
  try {
    map.size_limit = j.value("size_limit", 25);
    for (const auto& jc : j.at("concepts")) {
      Concept c;
      c.id = jc.at("id").get<std::string>();
      c.label = jc.at("label").get<std::string>();
      c.score = jc.value("score", 0.0);
      if (jc.contains("surface_forms")) {
        for (const auto& form : jc.at("surface_forms")) {
          c.surface_forms.insert(form.get<std::string>());
        }
      }
      if (c.surface_forms.empty()) c.surface_forms.insert(c.label);
      map.concepts.push_back(std::move(c));
    }
    for (const auto& jr : j.at("relations")) {
      Relation r;
      r.source = jr.at("source").get<std::string>();
      r.target = jr.at("target").get<std::string>();
      r.label = jr.at("label").get<std::string>();
      if (jr.contains("provenance")) r.provenance = provenance_from_json(jr.at("provenance"));
      map.relations.push_back(std::move(r));
    }
  } catch (const json::exception& e) {
    throw ParseError(name + ": " + e.what());
  }
  return map;
}

}  // namespace

std::string map_to_dot(const ConceptMap& map) {
  // Node names are the concept labels; summary validation guarantees
  // they are unique.
  std::ostringstream out;
  out << "digraph conceptmap {\n";
  out << "  node [shape=box];\n";
  for (const auto& c : map.concepts) {
    out << "  \"" << dot_escape(c.label) << "\";\n";
  }
  for (const auto& r : map.relations) {
    const Concept* src = map.find_concept(r.source);
    const Concept* dst = map.find_concept(r.target);
    out << "  \"" << dot_escape(src->label) << "\" -> \"" << dot_escape(dst->label)
        << "\" [label=\"" << dot_escape(r.label) << "\"];\n";
  }
  out << "}\n";
  return out.str();
}

std::string map_to_json(const ConceptMap& map) {
  return map_to_json_value(map).dump(2) + "\n";
}

void export_map(const ConceptMap& map, MapFormat format, std::ostream& out) {
  validate_map(map, /*summary=*/true);
  out << (format == MapFormat::kDot ? map_to_dot(map) : map_to_json(map));
}

ConceptMap map_from_json(const std::string& text, const std::string& name) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ParseError(name + ": " + e.what());
  }
  return map_from_json_value(j, name);
}

ConceptMap load_map(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open map file: " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return map_from_json(buf.str(), path.string());
}

void save_map(const ConceptMap& map, const fs::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write map file: " + path.string());
  out << map_to_json(map);
}

std::string topic_to_json(const TopicCluster& cluster) {
  json docs = json::array();
  for (const auto& doc : cluster.documents) {
    docs.push_back(json{{"id", doc.id}, {"text", doc.raw_text}});
  }
  const json j{{"id", cluster.id},
               {"description", cluster.description},
               {"documents", std::move(docs)}};
  return j.dump(2) + "\n";
}

TopicCluster topic_from_json(const std::string& text, const std::string& name) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ParseError(name + ": " + e.what());
  }
  TopicCluster cluster;
  try {
    cluster.id = j.at("id").get<std::string>();
    cluster.description = j.at("description").get<std::string>();
    for (const auto& jd : j.at("documents")) {
      Document doc;
      doc.id = jd.at("id").get<std::string>();
      if (jd.contains("text")) {
        doc.raw_text = jd.at("text").get<std::string>();
      } else if (jd.contains("file")) {
        doc.raw_text = "@file:" + jd.at("file").get<std::string>();
      } else {
        throw ParseError(name + ": document '" + doc.id + "' has neither text nor file");
      }
      cluster.documents.push_back(std::move(doc));
    }
  } catch (const json::exception& e) {
    throw ParseError(name + ": " + e.what());
  }
  return cluster;
}

void write_propositions_tsv(std::span<const Proposition> props, std::ostream& out) {
  out << "# id\targ1\trelation\targ2\tconfidence\tdocument\tsentence\tsuitability\n";
  for (const auto& p : props) {
    out << p.id << '\t' << p.arg1.label << '\t' << p.relation.label << '\t'
        << p.arg2.label << '\t' << std::setprecision(6) << p.confidence << '\t'
        << p.provenance.document_id << '\t' << p.provenance.sentence_index << '\t';
    if (p.suitability) {
      out << std::setprecision(6) << *p.suitability;
    } else {
      out << '-';
    }
    out << '\n';
  }
}

namespace {

Phrase annotated_phrase(const std::string& text) {
  Sentence sent;
  sent.tokens = ling::tokenize(text);
  ling::pos_tag(sent);
  ling::stem_tokens(sent);
  return Phrase::of(std::move(sent.tokens));
}

std::vector<std::string> split_tabs(const std::string& line) {
  std::vector<std::string> cols;
  std::size_t start = 0;
  while (true) {
    const auto tab = line.find('\t', start);
    cols.push_back(line.substr(start, tab - start));
    if (tab == std::string::npos) break;
    start = tab + 1;
  }
  return cols;
}

}  // namespace

std::vector<Proposition> read_propositions_tsv(std::istream& in, const std::string& name) {
  std::vector<Proposition> props;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    const auto cols = split_tabs(line);
    if (cols.size() < 5) {
      throw ParseError(name, line_no,
                       "expected id, arg1, relation, arg2, confidence[, document, sentence, "
                       "suitability]");
    }
    Proposition p;
    p.id = cols[0];
    p.arg1 = annotated_phrase(cols[1]);
    p.relation = annotated_phrase(cols[2]);
    p.arg2 = annotated_phrase(cols[3]);
    try {
      p.confidence = std::stod(cols[4]);
    } catch (const std::exception&) {
      throw ParseError(name, line_no, "bad confidence '" + cols[4] + "'");
    }
    if (cols.size() > 5) p.provenance.document_id = cols[5];
    if (cols.size() > 6 && !cols[6].empty()) {
      try {
        p.provenance.sentence_index = static_cast<std::size_t>(std::stoul(cols[6]));
      } catch (const std::exception&) {
        throw ParseError(name, line_no, "bad sentence index '" + cols[6] + "'");
      }
    }
    if (cols.size() > 7 && cols[7] != "-" && !cols[7].empty()) {
      try {
        p.suitability = std::stod(cols[7]);
      } catch (const std::exception&) {
        throw ParseError(name, line_no, "bad suitability '" + cols[7] + "'");
      }
    }
    validate(p);
    props.push_back(std::move(p));
  }
  return props;
}

}  // namespace cmapsum::corpus
