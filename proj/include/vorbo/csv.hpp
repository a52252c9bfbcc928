#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "vorbo/types.hpp"

namespace vorbo::csv {

/// Shortest round-trip decimal form ("nan" / "inf" / "-inf" for non-finite).
std::string format(double value);

/// Splits one CSV line on commas (no quoting support; fields never contain commas).
std::vector<std::string> split(std::string_view line);

/// Reads a numeric matrix, one point per line. A first line that does not
/// parse as numbers is treated as a header and skipped. Throws
/// std::runtime_error on ragged rows or unparsable values.
Matrix read_matrix(std::istream& in);

}  // namespace vorbo::csv
