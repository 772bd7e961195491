#include "weaver/table.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "weaver/errors.hpp"

namespace weaver {
namespace {

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

nlohmann::ordered_json json_number(double x) {
  if (!std::isfinite(x)) return nullptr;
  return x;
}

}  // namespace

void Table::add_row(std::vector<Cell> row) {
  if (row.size() != columns.size()) throw RangeError("row width does not match the column count");
  rows.push_back(std::move(row));
}

std::string format_double(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, ptr);
}

void write_table(const Table& table, Format format, std::ostream& out) {
  if (table.rows.empty()) throw RangeError("refusing to emit an empty table");

  if (format == Format::json) {
    auto doc = nlohmann::ordered_json::array();
    for (const auto& row : table.rows) {
      nlohmann::ordered_json obj = nlohmann::ordered_json::object();
      for (std::size_t c = 0; c < row.size(); ++c) {
        const auto& name = table.columns[c];
        std::visit(
            [&](const auto& v) {
              using T = std::decay_t<decltype(v)>;
              if constexpr (std::is_same_v<T, Rational>)
                obj[name] = {{"exact", to_string(v)}, {"approx", json_number(to_double(v))}};
              else if constexpr (std::is_same_v<T, double>)
                obj[name] = json_number(v);
              else
                obj[name] = v;
            },
            row[c]);
      }
      doc.push_back(std::move(obj));
    }
    out << doc.dump(2) << '\n';
    return;
  }

  const auto& first = table.rows.front();
  for (std::size_t c = 0; c < table.columns.size(); ++c) {
    if (c) out << ',';
    if (std::holds_alternative<Rational>(first[c]))
      out << table.columns[c] << "_exact," << table.columns[c] << "_approx";
    else
      out << table.columns[c];
  }
  out << '\n';
  for (const auto& row : table.rows) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c) out << ',';
      std::visit(
          [&](const auto& v) {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, Rational>)
              out << to_string(v) << ',' << format_double(to_double(v));
            else if constexpr (std::is_same_v<T, double>)
              out << format_double(v);
            else if constexpr (std::is_same_v<T, std::string>)
              out << csv_escape(v);
            else
              out << v;
          },
          row[c]);
    }
    out << '\n';
  }
}

int emit_table(const Table& table, Format format, const std::filesystem::path& path, std::ostream& out,
               std::ostream& err) {
  if (path.empty()) {
    write_table(table, format, out);
    return out ? 0 : 2;
  }
  std::ostringstream buffer;
  write_table(table, format, buffer);
  std::ofstream file(path, std::ios::binary | std::ios::trunc);
  if (!file) {
    err << "error: cannot open '" << path.string() << "' for writing\n";
    return 2;
  }
  file << buffer.str();
  file.flush();
  if (!file) {
    err << "error: failed writing '" << path.string() << "'\n";
    return 2;
  }
  return 0;
}

}  // namespace weaver
