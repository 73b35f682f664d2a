#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace infent::cli {

/// One table cell; monostate renders as an empty CSV field / JSON null.
using Cell = std::variant<std::monostate, bool, std::int64_t, double, std::string>;

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;

  void add(std::vector<Cell> row);
};

/// Ordered metadata; values are already rendered as strings.
struct Metadata {
  std::string command;
  std::vector<std::pair<std::string, std::string>> entries;
  std::vector<std::pair<std::string, std::string>> params;
  std::string timestamp;
};

/// Shortest round-trip decimal form.
std::string format_double(double x);

std::string render_csv(const Metadata& meta, const Table& table);
std::string render_json(const Metadata& meta, const Table& table);

/// ISO-8601 UTC, second resolution.
std::string utc_timestamp();

}  // namespace infent::cli
