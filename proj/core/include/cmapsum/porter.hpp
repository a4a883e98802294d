#pragma once

#include <string>
#include <string_view>

namespace cmapsum {

// Porter suffix stripping, original 1980 rule set. Input is lowercased
// first; words of length <= 2 are returned unchanged. Throws
// ValidationError on empty input.
std::string porter_stem(std::string_view word);

}  // namespace cmapsum
