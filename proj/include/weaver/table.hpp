#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <variant>
#include <vector>

#include "weaver/rational.hpp"

namespace weaver {

enum class Format { csv, json };

/// A rectangular result set. Rational cells are written twice: as an exact
/// "a/b" string and as the nearest binary64.
struct Table {
  using Cell = std::variant<std::int64_t, double, std::string, Rational>;

  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;

  void add_row(std::vector<Cell> row);
};

/// CSV: header row, `,` delimiter, rational column `x` expands to
/// `x_exact,x_approx`. JSON: array of objects; rational fields become
/// {"exact": "a/b", "approx": number}. Throws RangeError on an empty table.
void write_table(const Table& table, Format format, std::ostream& out);

/// Returns 0 on success and 2 when the file cannot be written (the reason goes
/// to `err`). An empty path writes to `out`.
int emit_table(const Table& table, Format format, const std::filesystem::path& path, std::ostream& out,
               std::ostream& err);

/// Shortest round-trip decimal form.
std::string format_double(double value);

}  // namespace weaver
