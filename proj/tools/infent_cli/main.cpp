#include <cstdlib>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>
#include <json.hpp>

#include "config.hpp"
#include "context.hpp"
#include "infent/errors.hpp"
#include "output.hpp"

namespace {

using namespace infent::cli;

int report_error(const std::string& type, const std::string& message, int code) {
  nlohmann::ordered_json j;
  j["error"]["type"] = type;
  j["error"]["message"] = message;
  std::cerr << j.dump() << '\n';
  return code;
}

std::size_t default_threads() {
  const char* env = std::getenv("INFENT_THREADS");
  if (!env || !*env) return 1;
  char* end = nullptr;
  const unsigned long long n = std::strtoull(env, &end, 10);
  if (*end != '\0' || n == 0 || n > 1024) throw UsageError("INFENT_THREADS must be an integer in [1, 1024]");
  return static_cast<std::size_t>(n);
}

std::string join(const std::vector<std::string>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) out += (i ? "," : "") + v[i];
  return out;
}

/// Every option of the subcommand with its effective value.
std::vector<std::pair<std::string, std::string>> echo_params(const CLI::App& sub) {
  std::vector<std::pair<std::string, std::string>> out;
  for (const CLI::Option* opt : sub.get_options()) {
    if (opt->get_lnames().empty()) continue;
    const std::string& name = opt->get_lnames().front();
    if (name == "help") continue;
    std::string value = opt->count() ? join(opt->results()) : opt->get_default_str();
    if (value.size() >= 2 && ((value.front() == '[' && value.back() == ']') || value == "{}"))
      value = value.substr(1, value.size() - 2);
    out.emplace_back(name, value);
  }
  return out;
}

int run(std::vector<std::string> args) {
  CLI::App app{"Finite-truncation experiments on infinitely entangled states", "infent"};
  app.fallthrough();
  app.option_defaults()->always_capture_default();
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(INFENT_VERSION));

  Context ctx;
  ctx.threads = default_threads();
  app.add_option("--format", ctx.format, "csv | json")->check(CLI::IsMember({"csv", "json"}));
  app.add_option("--out", ctx.out, "output file (default: standard output)");
  app.add_option("--seed", ctx.seed, "seed for all random draws");
  app.add_option("--threads", ctx.threads, "worker threads (default: INFENT_THREADS or 1)")->check(CLI::Range(1, 1024));
  app.add_option("--config", ctx.config, "key = value file; command-line flags take precedence");

  Registry reg;
  add_schmidt(app, reg);
  add_entropy_divergence(app, reg);
  add_nogo_bound(app, reg);
  add_bell_seesaw(app, reg);
  add_chain_expect(app, reg);
  add_modular(app, reg);
  add_doubles(app, reg);
  add_weyl_projector(app, reg);
  add_nopa_extract(app, reg);
  add_nopa_perm(app, reg);
  add_epr_covariance(app, reg);
  add_char_fn(app, reg);
  add_grid_extract(app, reg);

  std::vector<std::string> names;
  for (const auto& [name, runner] : reg) names.push_back(name);
  args = merge_config(std::move(args), names);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend() - 1);
    app.parse(reversed);
  } catch (const CLI::Success& e) {
    // --help and --version
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return report_error("usage", e.what(), 2);
  }

  const CLI::App* sub = app.get_subcommands().front();
  const CommandResult result = reg.at(sub->get_name())(ctx);

  Metadata meta;
  meta.command = sub->get_name();
  meta.entries = {{"version", INFENT_VERSION},
                  {"tolerances", "structural=1e-12,spectral=1e-10,unitary=1e-10"},
                  {"threads", std::to_string(ctx.threads)},
                  {"seed", std::to_string(ctx.seed)}};
  meta.entries.insert(meta.entries.end(), result.metadata.begin(), result.metadata.end());
  meta.params = echo_params(*sub);
  meta.timestamp = utc_timestamp();

  const std::string text = ctx.format == "json" ? render_json(meta, result.table) : render_csv(meta, result.table);
  if (ctx.out.empty()) {
    std::cout << text;
  } else {
    std::ofstream f(ctx.out, std::ios::binary);
    if (!f) throw IoError("cannot write '" + ctx.out + "'");
    f << text;
    if (!f) throw IoError("write failed for '" + ctx.out + "'");
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(std::vector<std::string>(argv, argv + argc));
  } catch (const UsageError& e) {
    return report_error("usage", e.what(), 2);
  } catch (const IoError& e) {
    return report_error("io", e.what(), 1);
  } catch (const infent::ArgumentError& e) {
    return report_error("argument", e.what(), 1);
  } catch (const infent::PreconditionError& e) {
    return report_error("precondition", e.what(), 1);
  } catch (const infent::SizeError& e) {
    return report_error("size", e.what(), 1);
  } catch (const infent::TruncationError& e) {
    return report_error("truncation", e.what(), 1);
  } catch (const infent::UnsupportedError& e) {
    return report_error("unsupported", e.what(), 1);
  } catch (const std::exception& e) {
    return report_error("internal", e.what(), 1);
  }
}
