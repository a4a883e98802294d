#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <istream>
#include <sstream>

#include "cmapsum/errors.hpp"
#include "cmapsum/eval.hpp"
#include "cmapsum/porter.hpp"

namespace cmapsum::eval {

void SynonymTable::add(const std::string& word, const std::vector<std::string>& synonyms) {
  auto& set = table_[word];
  for (const auto& s : synonyms) {
    set.insert(s);
    table_[s].insert(word);  // symmetric lookup
  }
}

bool SynonymTable::related(const std::string& a, const std::string& b) const {
  if (auto it = table_.find(a); it != table_.end() && it->second.count(b)) return true;
  if (auto it = table_.find(b); it != table_.end() && it->second.count(a)) return true;
  return false;
}

SynonymTable SynonymTable::from_stream(std::istream& in, const std::string& name) {
  SynonymTable table;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    const auto tab = line.find('\t');
    if (tab == std::string::npos || tab == 0) {
      throw ParseError(name, line_no, "expected word<TAB>comma,joined,synonyms");
    }
    const std::string word = line.substr(0, tab);
    std::vector<std::string> synonyms;
    std::size_t start = tab + 1;
    while (start <= line.size()) {
      const auto comma = line.find(',', start);
      const std::string syn = line.substr(start, comma - start);
      if (!syn.empty()) synonyms.push_back(syn);
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
    table.add(word, synonyms);
  }
  return table;
}

SynonymTable SynonymTable::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open synonym file: " + path.string());
  return from_stream(in, path.string());
}

namespace {

constexpr std::size_t kNone = static_cast<std::size_t>(-1);

struct AlignmentState {
  // fixed[i] is the ref position hyp token i is already matched to
  // (from an earlier stage), or kNone.
  std::vector<std::size_t> fixed;
  std::vector<bool> ref_used;
};

// Whether hyp token h can match ref token r at the given stage:
// 0 = exact, 1 = stem, 2 = synonym lookup.
bool compatible(int stage, const std::string& hyp, const std::string& ref,
                const std::string& hyp_stem, const std::string& ref_stem,
                const SynonymTable* synonyms) {
  switch (stage) {
    case 0:
      return hyp == ref;
    case 1:
      return hyp_stem == ref_stem;
    default:
      return synonyms != nullptr && synonyms->related(hyp, ref);
  }
}

std::size_t count_chunks(const std::vector<std::size_t>& fixed) {
  std::size_t pairs = 0, links = 0;
  std::size_t prev_j = kNone;
  for (std::size_t i = 0; i < fixed.size(); ++i) {
    if (fixed[i] == kNone) {
      prev_j = kNone;
      continue;
    }
    ++pairs;
    if (prev_j != kNone && fixed[i] == prev_j + 1) ++links;
    prev_j = fixed[i];
  }
  return pairs - links;
}

// Exact stage alignment over all assignments (DP over a ref bitmask):
// maximizes this stage's match count, then the number of adjacent
// pairs in the cumulative alignment. Requires ref side <= 16.
void align_stage_exhaustive(AlignmentState& state,
                            const std::vector<std::uint32_t>& compat) {
  const std::size_t n_h = state.fixed.size();
  const std::size_t n_r = state.ref_used.size();
  const std::size_t n_prev = n_r + 1;  // j_prev in [0..n_r-1] or none
  const std::size_t n_mask = std::size_t{1} << n_r;
  constexpr std::int64_t kMatchValue = 1 << 10;  // links stay below this
  constexpr std::int64_t kUnreached = -1;

  std::uint32_t base_mask = 0;
  for (std::size_t j = 0; j < n_r; ++j) {
    if (state.ref_used[j]) base_mask |= (std::uint32_t{1} << j);
  }

  // layer[(mask << shift) + j_prev_slot]; masks only ever grow over
  // base_mask but indexing over the full range keeps it simple.
  std::vector<std::vector<std::int64_t>> layers(
      n_h + 1, std::vector<std::int64_t>(n_mask * n_prev, kUnreached));
  const auto slot = [n_prev](std::size_t mask, std::size_t j_prev) {
    return mask * n_prev + (j_prev == kNone ? n_prev - 1 : j_prev);
  };
  layers[0][slot(base_mask, kNone)] = 0;

  for (std::size_t i = 0; i < n_h; ++i) {
    for (std::size_t mask = base_mask; mask < n_mask; ++mask) {
      if ((mask & base_mask) != base_mask) continue;
      for (std::size_t p = 0; p < n_prev; ++p) {
        const std::int64_t value = layers[i][mask * n_prev + p];
        if (value == kUnreached) continue;
        const std::size_t j_prev = p == n_prev - 1 ? kNone : p;

        if (state.fixed[i] != kNone) {
          const std::size_t jf = state.fixed[i];
          const std::int64_t link = (j_prev != kNone && jf == j_prev + 1) ? 1 : 0;
          auto& cell = layers[i + 1][slot(mask, jf)];
          cell = std::max(cell, value + link);
          continue;
        }
        // Skip this hyp token.
        auto& skip_cell = layers[i + 1][slot(mask, kNone)];
        skip_cell = std::max(skip_cell, value);
        // Match it to any free compatible ref.
        std::uint32_t options = compat[i] & ~static_cast<std::uint32_t>(mask);
        while (options != 0) {
          const std::uint32_t bit = options & (~options + 1);
          options ^= bit;
          const std::size_t j = static_cast<std::size_t>(std::countr_zero(bit));
          const std::int64_t link = (j_prev != kNone && j == j_prev + 1) ? 1 : 0;
          auto& cell = layers[i + 1][slot(mask | bit, j)];
          cell = std::max(cell, value + kMatchValue + link);
        }
      }
    }
  }

  // Best terminal value, then walk backwards re-deriving one optimal
  // assignment (first option that reaches the recorded value).
  std::int64_t best = kUnreached;
  std::size_t best_mask = base_mask, best_prev = kNone;
  for (std::size_t mask = base_mask; mask < n_mask; ++mask) {
    if ((mask & base_mask) != base_mask) continue;
    for (std::size_t p = 0; p < n_prev; ++p) {
      const std::int64_t value = layers[n_h][mask * n_prev + p];
      if (value > best) {
        best = value;
        best_mask = mask;
        best_prev = p == n_prev - 1 ? kNone : p;
      }
    }
  }

  std::size_t mask = best_mask, j_prev = best_prev;
  std::int64_t value = best;
  for (std::size_t i = n_h; i-- > 0;) {
    bool resolved = false;
    if (state.fixed[i] != kNone) {
      const std::size_t jf = state.fixed[i];
      for (std::size_t p = 0; p < n_prev && !resolved; ++p) {
        const std::size_t prev = p == n_prev - 1 ? kNone : p;
        const std::int64_t before = layers[i][mask * n_prev + p];
        if (before == kUnreached || jf != (j_prev == kNone ? kNone : j_prev)) continue;
        const std::int64_t link = (prev != kNone && jf == prev + 1) ? 1 : 0;
        if (before + link == value) {
          j_prev = prev;
          value = before;
          resolved = true;
        }
      }
    } else {
      // Was token i matched (to j_prev) or skipped?
      if (j_prev != kNone) {
        const std::uint32_t bit = std::uint32_t{1} << j_prev;
        if ((compat[i] & bit) != 0 && (mask & bit) != 0) {
          const std::size_t prev_mask = mask ^ bit;
          for (std::size_t p = 0; p < n_prev && !resolved; ++p) {
            const std::size_t prev = p == n_prev - 1 ? kNone : p;
            const std::int64_t before = layers[i][prev_mask * n_prev + p];
            if (before == kUnreached) continue;
            const std::int64_t link = (prev != kNone && j_prev == prev + 1) ? 1 : 0;
            if (before + kMatchValue + link == value) {
              state.fixed[i] = j_prev;
              state.ref_used[j_prev] = true;
              mask = prev_mask;
              j_prev = prev;
              value = before;
              resolved = true;
            }
          }
        }
      }
      if (!resolved) {
        // Skipped: previous state had the same mask, any j_prev slot.
        for (std::size_t p = 0; p < n_prev && !resolved; ++p) {
          const std::size_t prev = p == n_prev - 1 ? kNone : p;
          const std::int64_t before = layers[i][mask * n_prev + p];
          if (before == value) {
            j_prev = prev;
            resolved = true;
          }
        }
      }
    }
    if (!resolved) {
      throw std::logic_error("meteor: alignment reconstruction failed");
    }
  }
}

// Polynomial stage alignment: Kuhn's augmenting paths for an exact
// maximum matching, then local swap/move passes to recover adjacency.
void align_stage_greedy(AlignmentState& state,
                        const std::vector<std::vector<std::size_t>>& compat_lists) {
  const std::size_t n_h = state.fixed.size();
  const std::size_t n_r = state.ref_used.size();

  std::vector<std::size_t> ref_to_hyp(n_r, kNone);
  std::vector<char> visited(n_r, 0);

  const auto augment = [&](auto&& self, std::size_t i) -> bool {
    for (std::size_t j : compat_lists[i]) {
      if (state.ref_used[j] || visited[j]) continue;
      visited[j] = 1;
      if (ref_to_hyp[j] == kNone || self(self, ref_to_hyp[j])) {
        ref_to_hyp[j] = i;
        return true;
      }
    }
    return false;
  };

  for (std::size_t i = 0; i < n_h; ++i) {
    if (state.fixed[i] != kNone || compat_lists[i].empty()) continue;
    std::fill(visited.begin(), visited.end(), 0);
    augment(augment, i);
  }

  std::vector<std::size_t> stage_match(n_h, kNone);
  for (std::size_t j = 0; j < n_r; ++j) {
    if (ref_to_hyp[j] != kNone) stage_match[ref_to_hyp[j]] = j;
  }

  // Merge, then improve adjacency: move single pairs to free refs and
  // swap ref assignments between stage pairs while chunks shrink.
  std::vector<std::size_t> merged = state.fixed;
  std::vector<bool> used = state.ref_used;
  std::vector<std::size_t> stage_positions;
  for (std::size_t i = 0; i < n_h; ++i) {
    if (stage_match[i] != kNone) {
      merged[i] = stage_match[i];
      used[stage_match[i]] = true;
      stage_positions.push_back(i);
    }
  }

  bool improved = true;
  std::size_t rounds = 0;
  const std::size_t max_rounds = 2 * (n_h + 1);
  while (improved && rounds++ < max_rounds) {
    improved = false;
    std::size_t current = count_chunks(merged);
    for (std::size_t i : stage_positions) {
      for (std::size_t j = 0; j < n_r; ++j) {
        if (used[j]) continue;
        if (std::find(compat_lists[i].begin(), compat_lists[i].end(), j) ==
            compat_lists[i].end()) {
          continue;
        }
        const std::size_t old_j = merged[i];
        merged[i] = j;
        const std::size_t candidate = count_chunks(merged);
        if (candidate < current) {
          used[old_j] = false;
          used[j] = true;
          current = candidate;
          improved = true;
        } else {
          merged[i] = old_j;
        }
      }
    }
    for (std::size_t a_idx = 0; a_idx < stage_positions.size(); ++a_idx) {
      for (std::size_t b_idx = a_idx + 1; b_idx < stage_positions.size(); ++b_idx) {
        const std::size_t a = stage_positions[a_idx];
        const std::size_t b = stage_positions[b_idx];
        const std::size_t ja = merged[a], jb = merged[b];
        const bool a_takes_jb = std::find(compat_lists[a].begin(), compat_lists[a].end(),
                                          jb) != compat_lists[a].end();
        const bool b_takes_ja = std::find(compat_lists[b].begin(), compat_lists[b].end(),
                                          ja) != compat_lists[b].end();
        if (!a_takes_jb || !b_takes_ja) continue;
        merged[a] = jb;
        merged[b] = ja;
        const std::size_t candidate = count_chunks(merged);
        if (candidate < current) {
          current = candidate;
          improved = true;
        } else {
          merged[a] = ja;
          merged[b] = jb;
        }
      }
    }
  }

  state.fixed = std::move(merged);
  state.ref_used = std::move(used);
}

}  // namespace

MeteorAlignment align_unigrams(std::span<const std::string> hyp,
                               std::span<const std::string> ref, const MeteorParams& params,
                               AlignMode mode) {
  if (mode == AlignMode::kAuto) {
    mode = (hyp.size() <= params.exhaustive_limit && ref.size() <= params.exhaustive_limit)
               ? AlignMode::kExhaustive
               : AlignMode::kGreedy;
  }
  if (mode == AlignMode::kExhaustive && ref.size() > 14) {
    mode = AlignMode::kGreedy;  // bitmask DP bound
  }

  std::vector<std::string> hyp_stems, ref_stems;
  hyp_stems.reserve(hyp.size());
  ref_stems.reserve(ref.size());
  for (const auto& t : hyp) hyp_stems.push_back(porter_stem(t));
  for (const auto& t : ref) ref_stems.push_back(porter_stem(t));

  AlignmentState state;
  state.fixed.assign(hyp.size(), kNone);
  state.ref_used.assign(ref.size(), false);

  const int stages = params.synonyms != nullptr && !params.synonyms->empty() ? 3 : 2;
  for (int stage = 0; stage < stages; ++stage) {
    std::vector<std::uint32_t> compat_bits(hyp.size(), 0);
    std::vector<std::vector<std::size_t>> compat_lists(hyp.size());
    bool any = false;
    for (std::size_t i = 0; i < hyp.size(); ++i) {
      if (state.fixed[i] != kNone) continue;
      for (std::size_t j = 0; j < ref.size(); ++j) {
        if (state.ref_used[j]) continue;
        if (compatible(stage, hyp[i], ref[j], hyp_stems[i], ref_stems[j], params.synonyms)) {
          compat_lists[i].push_back(j);
          if (j < 32) compat_bits[i] |= (std::uint32_t{1} << j);
          any = true;
        }
      }
    }
    if (!any) continue;
    if (mode == AlignMode::kExhaustive) {
      align_stage_exhaustive(state, compat_bits);
    } else {
      align_stage_greedy(state, compat_lists);
    }
  }

  MeteorAlignment out;
  for (std::size_t i = 0; i < state.fixed.size(); ++i) {
    if (state.fixed[i] != kNone) ++out.matches;
  }
  out.chunks = out.matches == 0 ? 0 : count_chunks(state.fixed);
  return out;
}

double meteor_score(std::span<const std::string> hyp, std::span<const std::string> ref,
                    const MeteorParams& params) {
  if (hyp.empty() || ref.empty()) {
    throw ValidationError("meteor_score: empty token list");
  }
  const auto alignment = align_unigrams(hyp, ref, params);
  const double m = static_cast<double>(alignment.matches);
  if (m == 0.0) return 0.0;

  const double precision = m / static_cast<double>(hyp.size());
  const double recall = m / static_cast<double>(ref.size());
  const double fmean =
      precision * recall / (params.alpha * precision + (1.0 - params.alpha) * recall);
  const double penalty =
      params.gamma * std::pow(static_cast<double>(alignment.chunks) / m, params.beta);
  return (1.0 - penalty) * fmean;
}

}  // namespace cmapsum::eval
