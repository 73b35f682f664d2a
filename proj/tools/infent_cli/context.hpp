#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "output.hpp"

namespace CLI {
class App;
}

namespace infent::cli {

/// Invalid configuration detected outside the flag parser.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// I/O failure while reading inputs or writing results.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Context {
  std::string format = "csv";
  std::string out;
  std::string config;
  std::uint64_t seed = 0;
  std::size_t threads = 1;
};

struct CommandResult {
  Table table;
  std::vector<std::pair<std::string, std::string>> metadata;
};

using Runner = std::function<CommandResult(const Context&)>;

/// Subcommand name -> runner, filled by the add_* functions.
using Registry = std::map<std::string, Runner>;

void add_schmidt(CLI::App& app, Registry& reg);
void add_entropy_divergence(CLI::App& app, Registry& reg);
void add_nogo_bound(CLI::App& app, Registry& reg);
void add_bell_seesaw(CLI::App& app, Registry& reg);
void add_chain_expect(CLI::App& app, Registry& reg);
void add_modular(CLI::App& app, Registry& reg);
void add_doubles(CLI::App& app, Registry& reg);
void add_weyl_projector(CLI::App& app, Registry& reg);
void add_nopa_extract(CLI::App& app, Registry& reg);
void add_nopa_perm(CLI::App& app, Registry& reg);
void add_epr_covariance(CLI::App& app, Registry& reg);
void add_char_fn(CLI::App& app, Registry& reg);
void add_grid_extract(CLI::App& app, Registry& reg);

/// Sweep over lambda or r: at most one list may be given, the other is derived.
struct SqueezeSweep {
  std::vector<double> lambda;
  std::vector<double> r;
  std::vector<double> default_lambda;

  /// Pairs (lambda, r) in the order given.
  [[nodiscard]] std::vector<std::pair<double, double>> points() const;
};

void add_squeeze_options(CLI::App& sub, SqueezeSweep& sweep);

}  // namespace infent::cli
