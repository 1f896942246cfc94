#pragma once

#include <string>

namespace fucik {

/// Shortest decimal text that parses back to exactly `value`; "nan", "inf"
/// and "-inf" for non-finite input.
std::string format_number(double value);

}  // namespace fucik
