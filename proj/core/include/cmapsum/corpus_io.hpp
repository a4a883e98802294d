#pragma once

#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "cmapsum/types.hpp"

namespace cmapsum::corpus {

enum class MapFormat { kDot, kNativeJson };

// Serializes a validated summary map. DOT uses concept labels as node
// names; JSON round-trips losslessly through map_from_json.
void export_map(const ConceptMap& map, MapFormat format, std::ostream& out);
std::string map_to_json(const ConceptMap& map);
std::string map_to_dot(const ConceptMap& map);

ConceptMap map_from_json(const std::string& text, const std::string& name = "<map>");
ConceptMap load_map(const std::filesystem::path& path);
void save_map(const ConceptMap& map, const std::filesystem::path& path);

std::string topic_to_json(const TopicCluster& cluster);
TopicCluster topic_from_json(const std::string& text, const std::string& name = "<topic>");

// Tab-separated propositions:
//   arg1  relation  arg2  confidence  document  sentence  [suitability]
// Reading re-runs tokenization, tagging and stemming on each phrase.
void write_propositions_tsv(std::span<const Proposition> props, std::ostream& out);
std::vector<Proposition> read_propositions_tsv(std::istream& in,
                                               const std::string& name = "<tsv>");

}  // namespace cmapsum::corpus
