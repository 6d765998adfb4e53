#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace ionet::csv {

/// Splits one record. Double quotes enclose fields containing commas and
/// `""` inside quotes is a literal quote. Unquoted fields are trimmed.
/// Throws DataError (with `line_no`) on an unterminated quote.
std::vector<std::string> split(std::string_view line, std::size_t line_no = 0);

/// Quotes a field only when it needs it.
std::string quote(const std::string& field);

std::string_view trim(std::string_view s);

} // namespace ionet::csv
