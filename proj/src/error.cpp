#include "ionet/error.hpp"

namespace ionet {

namespace {

std::string locate(const std::string& what, std::optional<std::size_t> row,
                   std::optional<std::size_t> column) {
    if (!row && !column) return what;
    std::string out = what + " (";
    if (row) out += "row " + std::to_string(*row);
    if (row && column) out += ", ";
    if (column) out += "column " + std::to_string(*column);
    return out + ")";
}

} // namespace

DataError::DataError(const std::string& what, std::optional<std::size_t> row,
                     std::optional<std::size_t> column)
    : Error(locate(what, row, column)), row_(row), column_(column) {}

ConvergenceError::ConvergenceError(const std::string& what, int iterations, double last_change)
    : NumericalError(what + " after " + std::to_string(iterations) + " iterations"),
      iterations_(iterations), last_change_(last_change) {}

} // namespace ionet
