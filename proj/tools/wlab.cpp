// wlab: batch front end.
//
//   wlab <command> --config <file> [--out <dir>] [--seed <u64>] [--set key.path=value ...]
//
// Values given with --set replace the same key of the config file; the
// value is parsed as JSON when possible and kept as a string otherwise.

#include <chrono>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>

#include "CLI11.hpp"
#include "commands.hpp"
#include "wlab/error.hpp"
#include "wlab/parallel.hpp"

namespace {

using wlab::Json;
namespace cli = wlab::cli;

void apply_override(Json& cfg, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos || eq == 0) throw wlab::ParseError("override must look like key.path=value: " + assignment);
  std::string pointer = "/" + assignment.substr(0, eq);
  for (auto& c : pointer)
    if (c == '.') c = '/';
  const std::string text = assignment.substr(eq + 1);
  Json value;
  try {
    value = Json::parse(text);
  } catch (const Json::exception&) {
    value = text;
  }
  cfg[Json::json_pointer(pointer)] = value;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Numerical lab for elliptic Weingarten surfaces"};
  app.require_subcommand(1, 1);
  std::string config_path, out_dir = ".";
  std::uint64_t seed = 0;
  std::vector<std::string> overrides;

  const std::map<std::string, int (*)(const cli::Context&)> commands = {
      {"certify", cli::cmd_certify}, {"solve", cli::cmd_solve},   {"revolve", cli::cmd_revolve},
      {"diagram", cli::cmd_diagram}, {"parallel", cli::cmd_parallel}, {"linop", cli::cmd_linop},
      {"blowup", cli::cmd_blowup}};
  for (const auto& [name, fn] : commands) {
    auto* sub = app.add_subcommand(name);
    sub->add_option("--config", config_path, "experiment config (JSON)")->required();
    sub->add_option("--out", out_dir, "output directory");
    sub->add_option("--seed", seed, "seed for randomized sampling");
    sub->add_option("--set", overrides, "override a config value, key.path=value");
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : cli::kIoParse;
  }
  const std::string name = app.get_subcommands().front()->get_name();

  cli::Context ctx;
  ctx.out_dir = out_dir;
  ctx.seed = seed;
  try {
    std::ifstream in(config_path);
    if (!in) throw wlab::Error("cannot open config " + config_path);
    try {
      ctx.config = Json::parse(in);
    } catch (const Json::parse_error& e) {
      throw wlab::ParseError(config_path + ": " + e.what());
    }
    for (const auto& o : overrides) apply_override(ctx.config, o);
    std::filesystem::create_directories(out_dir);

    const auto t0 = std::chrono::system_clock::now();
    const int rc = commands.at(name)(ctx);
    const auto t1 = std::chrono::system_clock::now();
    const std::time_t stamp = std::chrono::system_clock::to_time_t(t0);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&stamp));
    cli::write_json(ctx, "run.json",
                    Json{{"command", name},
                         {"config", config_path},
                         {"exit_code", rc},
                         {"seed", seed},
                         {"started_utc", buf},
                         {"threads", wlab::thread_count()},
                         {"wall_seconds", std::chrono::duration<double>(t1 - t0).count()}});
    return rc;
  } catch (const wlab::ParseError& e) {
    std::cerr << "wlab " << name << ": parse error: " << e.what() << '\n';
    return cli::kIoParse;
  } catch (const Json::exception& e) {
    std::cerr << "wlab " << name << ": bad config: " << e.what() << '\n';
    return cli::kIoParse;
  } catch (const wlab::RejectedInput& e) {
    std::cerr << "wlab " << name << ": rejected: " << e.what() << '\n';
    return cli::kCertification;
  } catch (const wlab::DomainError& e) {
    std::cerr << "wlab " << name << ": domain error: " << e.what() << '\n';
    return cli::kCertification;
  } catch (const std::exception& e) {
    std::cerr << "wlab " << name << ": " << e.what() << '\n';
    return cli::kIoParse;
  }
}
