#include "support/helpers.hpp"

#include <stdexcept>

namespace testsupport {

double best_connected_subgraph_score(const cmapsum::ConceptMap& map,
                                     const std::map<std::string, double>& scores,
                                     int limit) {
  const std::size_t n = map.concepts.size();
  if (n > 20) throw std::invalid_argument("oracle limited to 20 nodes");

  std::vector<double> score(n);
  std::map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < n; ++i) {
    index[map.concepts[i].id] = i;
    score[i] = scores.at(map.concepts[i].id);
  }
  std::vector<std::uint32_t> adj(n, 0);
  for (const auto& rel : map.relations) {
    const std::size_t s = index.at(rel.source);
    const std::size_t t = index.at(rel.target);
    adj[s] |= (1u << t);
    adj[t] |= (1u << s);
  }

  double best = -1.0;
  const std::uint32_t end = 1u << n;
  for (std::uint32_t subset = 1; subset < end; ++subset) {
    if (static_cast<int>(__builtin_popcount(subset)) > limit) continue;
    // Connectivity by BFS within the subset.
    const std::uint32_t start = subset & (~subset + 1);
    std::uint32_t seen = start;
    std::uint32_t frontier = start;
    while (frontier != 0) {
      std::uint32_t next = 0;
      std::uint32_t rest = frontier;
      while (rest != 0) {
        const std::uint32_t bit = rest & (~rest + 1);
        rest ^= bit;
        const std::size_t v = static_cast<std::size_t>(__builtin_ctz(bit));
        next |= adj[v] & subset & ~seen;
      }
      seen |= next;
      frontier = next;
    }
    if (seen != subset) continue;
    double total = 0.0;
    std::uint32_t rest = subset;
    while (rest != 0) {
      const std::uint32_t bit = rest & (~rest + 1);
      rest ^= bit;
      total += score[static_cast<std::size_t>(__builtin_ctz(bit))];
    }
    if (total > best) best = total;
  }
  return best;
}

}  // namespace testsupport
