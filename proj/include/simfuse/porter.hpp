#pragma once

#include <string>
#include <string_view>

namespace simfuse {

/// Porter stemmer. Expects a lowercased word; words shorter than three
/// characters are returned unchanged. Matches the widely distributed
/// reference implementation, including its three documented departures
/// from the original 1980 algorithm description.
std::string porter_stem(std::string_view word);

}  // namespace simfuse
