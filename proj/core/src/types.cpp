#include "cmapsum/types.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "cmapsum/errors.hpp"
#include "cmapsum/porter.hpp"

namespace cmapsum {

std::size_t Document::token_count() const {
  std::size_t n = 0;
  for (const auto& s : sentences) n += s.tokens.size();
  return n;
}

std::size_t TopicCluster::token_count() const {
  std::size_t n = 0;
  for (const auto& d : documents) n += d.token_count();
  return n;
}

void validate(const TopicCluster& cluster) {
  std::vector<std::string> problems;
  if (cluster.id.empty()) problems.push_back("topic id is empty");
  if (cluster.description.empty()) problems.push_back("topic description is empty");
  if (cluster.documents.empty()) problems.push_back("topic has no documents");

  std::unordered_set<std::string> seen;
  for (const auto& doc : cluster.documents) {
    if (doc.id.empty()) problems.push_back("document with empty id");
    if (!seen.insert(doc.id).second) {
      problems.push_back("duplicate document id '" + doc.id + "'");
    }
    std::size_t prev_end = 0;
    bool first = true;
    for (const auto& sent : doc.sentences) {
      for (const auto& tok : sent.tokens) {
        if (tok.span.end <= tok.span.begin) {
          problems.push_back("document '" + doc.id + "': empty token span");
        }
        if (tok.span.end > doc.raw_text.size()) {
          problems.push_back("document '" + doc.id + "': token span out of range");
        }
        if (!first && tok.span.begin < prev_end) {
          problems.push_back("document '" + doc.id + "': overlapping token spans");
        }
        prev_end = tok.span.end;
        first = false;
      }
    }
  }
  if (!problems.empty()) {
    std::ostringstream oss;
    oss << "invalid topic cluster:";
    for (const auto& p : problems) oss << "\n  - " << p;
    throw ValidationError(oss.str());
  }
}

Phrase Phrase::of(std::vector<Token> tokens) {
  Phrase phrase;
  phrase.tokens = std::move(tokens);
  std::string label;
  for (const auto& tok : phrase.tokens) {
    if (!label.empty()) label += ' ';
    label += tok.text;
  }
  phrase.label = std::move(label);
  return phrase;
}

std::string Phrase::stem_key() const {
  std::string key;
  for (const auto& tok : tokens) {
    if (!key.empty()) key += ' ';
    key += tok.stem.empty() ? porter_stem(tok.text) : tok.stem;
  }
  return key;
}

void validate(const Proposition& p) {
  std::vector<std::string> problems;
  if (p.arg1.empty()) problems.push_back("empty first argument");
  if (p.relation.empty()) problems.push_back("empty relation");
  if (p.arg2.empty()) problems.push_back("empty second argument");
  if (p.confidence < 0.0 || p.confidence > 1.0) problems.push_back("confidence outside [0,1]");
  if (p.suitability && (*p.suitability < 0.0 || *p.suitability > 1.0)) {
    problems.push_back("suitability outside [0,1]");
  }
  if (p.importance && *p.importance < 0.0) problems.push_back("negative importance");
  if (!problems.empty()) {
    std::string msg = "invalid proposition '" + p.id + "':";
    for (const auto& pr : problems) msg += " " + pr + ";";
    throw ValidationError(msg);
  }
}

const Concept* ConceptMap::find_concept(const std::string& id) const {
  for (const auto& c : concepts) {
    if (c.id == id) return &c;
  }
  return nullptr;
}

bool ConceptMap::connected() const {
  if (concepts.empty()) return false;
  std::unordered_map<std::string, std::size_t> index;
  index.reserve(concepts.size());
  for (std::size_t i = 0; i < concepts.size(); ++i) index[concepts[i].id] = i;

  std::vector<std::vector<std::size_t>> adj(concepts.size());
  for (const auto& rel : relations) {
    auto s = index.find(rel.source);
    auto t = index.find(rel.target);
    if (s == index.end() || t == index.end()) continue;
    adj[s->second].push_back(t->second);
    adj[t->second].push_back(s->second);
  }

  std::vector<bool> seen(concepts.size(), false);
  std::vector<std::size_t> stack{0};
  seen[0] = true;
  std::size_t reached = 1;
  while (!stack.empty()) {
    const std::size_t u = stack.back();
    stack.pop_back();
    for (std::size_t v : adj[u]) {
      if (!seen[v]) {
        seen[v] = true;
        ++reached;
        stack.push_back(v);
      }
    }
  }
  return reached == concepts.size();
}

std::vector<std::string> ConceptMap::violations(bool summary) const {
  std::vector<std::string> problems;

  std::unordered_set<std::string> ids;
  std::unordered_set<std::string> labels;
  for (const auto& c : concepts) {
    if (c.id.empty()) problems.push_back("concept with empty id");
    if (!ids.insert(c.id).second) problems.push_back("duplicate concept id '" + c.id + "'");
    if (c.label.empty()) problems.push_back("concept '" + c.id + "' has empty label");
    if (c.surface_forms.empty()) {
      problems.push_back("concept '" + c.id + "' has no surface forms");
    } else if (!c.surface_forms.count(c.label)) {
      problems.push_back("concept '" + c.id + "' label not among its surface forms");
    }
    if (summary && !c.label.empty() && !labels.insert(c.label).second) {
      problems.push_back("duplicate concept label '" + c.label + "'");
    }
  }

  std::set<std::tuple<std::string, std::string, std::string>> rel_keys;
  for (const auto& r : relations) {
    if (r.label.empty()) problems.push_back("relation with empty label");
    if (r.source == r.target) {
      problems.push_back("self-loop relation on concept '" + r.source + "'");
    }
    if (!ids.count(r.source)) {
      problems.push_back("relation endpoint '" + r.source + "' is not a concept");
    }
    if (!ids.count(r.target)) {
      problems.push_back("relation endpoint '" + r.target + "' is not a concept");
    }
    if (!rel_keys.insert({r.source, r.target, r.label}).second) {
      problems.push_back("duplicate relation (" + r.source + ", " + r.target + ", '" +
                         r.label + "')");
    }
  }

  if (summary) {
    if (concepts.empty()) {
      problems.push_back("summary map has no concepts");
    } else {
      if (static_cast<int>(concepts.size()) > size_limit) {
        problems.push_back("map exceeds size limit (" + std::to_string(concepts.size()) +
                           " > " + std::to_string(size_limit) + ")");
      }
      if (!connected()) problems.push_back("map is not connected");
    }
  }
  return problems;
}

void validate_map(const ConceptMap& map, bool summary) {
  const auto problems = map.violations(summary);
  if (problems.empty()) return;
  std::ostringstream oss;
  oss << "invalid concept map:";
  for (const auto& p : problems) oss << "\n  - " << p;
  throw ValidationError(oss.str());
}

}  // namespace cmapsum
