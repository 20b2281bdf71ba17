#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace hbsim {

/// Shortest round-trip decimal form of `x`, always containing a '.' or an
/// exponent so that 2.0 prints as "2.0".
std::string format_number(double x);

/// Comma-separated rows, LF line endings, no quoting.
using CsvTable = std::vector<std::vector<std::string>>;

void write_text_file(const std::string& path, const std::string& contents);
std::string read_text_file(const std::string& path);

/// Splits `text` into rows of fields. A trailing newline is optional.
CsvTable parse_csv(std::string_view text);

}  // namespace hbsim
