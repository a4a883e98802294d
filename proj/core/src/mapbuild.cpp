#include "cmapsum/mapbuild.hpp"

#include <algorithm>
#include <cctype>
#include <set>
#include <unordered_map>
#include <unordered_set>

#include "cmapsum/errors.hpp"
#include "cmapsum/linguistic.hpp"
#include "cmapsum/porter.hpp"

namespace cmapsum::mapbuild {

namespace {

const std::set<std::string>& leading_determiners() {
  static const std::set<std::string> words = {
      "the",  "a",   "an",  "this", "that", "these", "those", "my",
      "your", "his", "her", "its",  "our",  "their",
  };
  return words;
}

std::string lowercased(const std::string& s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) out.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  return out;
}

std::string key_from_token_texts(const std::vector<std::string>& texts) {
  std::size_t start = 0;
  while (start + 1 < texts.size() && leading_determiners().count(lowercased(texts[start]))) {
    ++start;
  }
  std::string key;
  for (std::size_t i = start; i < texts.size(); ++i) {
    if (!key.empty()) key += ' ';
    key += porter_stem(texts[i]);
  }
  return key;
}

}  // namespace

std::string concept_key(const Phrase& phrase) {
  std::vector<std::string> texts;
  texts.reserve(phrase.tokens.size());
  for (const auto& tok : phrase.tokens) texts.push_back(tok.text);
  return key_from_token_texts(texts);
}

std::string concept_key(const std::string& label) {
  std::vector<std::string> texts;
  for (const auto& tok : ling::tokenize(label)) texts.push_back(tok.text);
  return key_from_token_texts(texts);
}

std::vector<Concept> merge_concepts(const std::vector<Phrase>& phrases) {
  struct Group {
    std::map<std::string, std::size_t> form_counts;
  };
  std::map<std::string, Group> groups;  // key order fixes concept ids
  for (const auto& phrase : phrases) {
    if (phrase.empty()) continue;
    groups[concept_key(phrase)].form_counts[phrase.label] += 1;
  }

  std::vector<Concept> concepts;
  concepts.reserve(groups.size());
  std::size_t index = 0;
  for (const auto& [key, group] : groups) {
    Concept c;
    c.id = "c" + std::to_string(++index);
    std::size_t best_count = 0;
    for (const auto& [form, count] : group.form_counts) {
      c.surface_forms.insert(form);
      const bool better =
          count > best_count ||
          (count == best_count &&
           (form.size() < c.label.size() ||
            (form.size() == c.label.size() && form < c.label)));
      if (c.label.empty() || better) {
        c.label = form;
        best_count = count;
      }
    }
    concepts.push_back(std::move(c));
  }
  return concepts;
}

std::vector<Relation> select_relations(const std::vector<Proposition>& props,
                                       const std::vector<Concept>& concepts) {
  std::unordered_map<std::string, std::string> key_to_id;
  for (const auto& c : concepts) {
    key_to_id.emplace(concept_key(c.label), c.id);
  }

  struct Candidate {
    Relation relation;
    std::size_t label_tokens;
    std::size_t order;
  };
  std::map<std::pair<std::string, std::string>, Candidate> best;

  std::size_t order = 0;
  for (const auto& p : props) {
    const auto s = key_to_id.find(concept_key(p.arg1));
    const auto t = key_to_id.find(concept_key(p.arg2));
    if (s == key_to_id.end() || t == key_to_id.end()) {
      throw ValidationError("select_relations: proposition '" + p.id +
                            "' does not map onto the merged concepts");
    }
    if (s->second == t->second) continue;  // self-loop

    Candidate cand;
    cand.relation = {s->second, t->second, p.relation.label, p.provenance};
    cand.label_tokens = p.relation.size();
    cand.order = order++;

    auto pair_key = std::minmax(s->second, t->second);
    auto it = best.find(pair_key);
    if (it == best.end()) {
      best.emplace(pair_key, std::move(cand));
      continue;
    }
    const Candidate& held = it->second;
    const bool wins =
        cand.label_tokens != held.label_tokens
            ? cand.label_tokens < held.label_tokens
        : cand.relation.label.size() != held.relation.label.size()
            ? cand.relation.label.size() < held.relation.label.size()
        : cand.relation.label != held.relation.label
            ? cand.relation.label < held.relation.label
            : cand.order < held.order;
    if (wins) it->second = std::move(cand);
  }

  std::vector<Relation> out;
  out.reserve(best.size());
  for (auto& [pair_key, cand] : best) out.push_back(std::move(cand.relation));
  return out;
}

ConceptMap build_graph(std::vector<Concept> concepts, std::vector<Relation> relations) {
  std::unordered_set<std::string> ids;
  for (const auto& c : concepts) ids.insert(c.id);
  for (const auto& r : relations) {
    if (!ids.count(r.source) || !ids.count(r.target)) {
      throw ValidationError("build_graph: dangling relation endpoint (" + r.source + " -> " +
                            r.target + ")");
    }
  }
  ConceptMap map;
  map.concepts = std::move(concepts);
  map.relations = std::move(relations);
  return map;
}

ConceptMap extract_summary_subgraph(const ConceptMap& map,
                                    const std::map<std::string, double>& scores, int limit,
                                    std::vector<std::pair<std::string, double>>* trace) {
  if (map.concepts.empty()) {
    throw ValidationError("extract_summary_subgraph: empty input map");
  }
  if (limit < 1) throw ValidationError("extract_summary_subgraph: limit must be >= 1");
  for (const auto& c : map.concepts) {
    if (!scores.count(c.id)) {
      throw ValidationError("extract_summary_subgraph: concept '" + c.id + "' has no score");
    }
  }

  const std::size_t n = map.concepts.size();
  std::unordered_map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < n; ++i) index[map.concepts[i].id] = i;

  std::vector<std::vector<std::size_t>> adj(n);
  for (const auto& r : map.relations) {
    const std::size_t s = index.at(r.source);
    const std::size_t t = index.at(r.target);
    adj[s].push_back(t);
    adj[t].push_back(s);
  }

  std::vector<bool> alive(n, true);
  std::size_t alive_count = n;

  const auto single_component = [&]() {
    std::size_t root = n;
    for (std::size_t i = 0; i < n; ++i) {
      if (alive[i]) {
        root = i;
        break;
      }
    }
    if (root == n) return false;
    std::vector<bool> seen(n, false);
    std::vector<std::size_t> stack{root};
    seen[root] = true;
    std::size_t reached = 1;
    while (!stack.empty()) {
      const std::size_t u = stack.back();
      stack.pop_back();
      for (std::size_t v : adj[u]) {
        if (alive[v] && !seen[v]) {
          seen[v] = true;
          ++reached;
          stack.push_back(v);
        }
      }
    }
    return reached == alive_count;
  };

  while (!(alive_count <= static_cast<std::size_t>(limit) && single_component())) {
    // Weakest remaining concept; ties by label, then id.
    std::size_t victim = n;
    for (std::size_t i = 0; i < n; ++i) {
      if (!alive[i]) continue;
      if (victim == n) {
        victim = i;
        continue;
      }
      const double si = scores.at(map.concepts[i].id);
      const double sv = scores.at(map.concepts[victim].id);
      if (si < sv ||
          (si == sv && (map.concepts[i].label < map.concepts[victim].label ||
                        (map.concepts[i].label == map.concepts[victim].label &&
                         map.concepts[i].id < map.concepts[victim].id)))) {
        victim = i;
      }
    }
    alive[victim] = false;
    --alive_count;
    if (trace) {
      trace->emplace_back(map.concepts[victim].id, scores.at(map.concepts[victim].id));
    }
  }

  ConceptMap out;
  out.size_limit = limit;
  std::unordered_set<std::string> kept;
  for (std::size_t i = 0; i < n; ++i) {
    if (alive[i]) {
      out.concepts.push_back(map.concepts[i]);
      kept.insert(map.concepts[i].id);
    }
  }
  for (const auto& r : map.relations) {
    if (kept.count(r.source) && kept.count(r.target)) out.relations.push_back(r);
  }
  return out;
}

}  // namespace cmapsum::mapbuild
