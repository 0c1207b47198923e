#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace xmodal {

/// Lowercases (Unicode simple case mapping) and splits on every code point
/// that is not a letter or decimal digit. Empty tokens are dropped; order and
/// duplicates are kept. Invalid UTF-8 bytes act as separators.
std::vector<std::string> tokenize(std::string_view text);

}  // namespace xmodal
