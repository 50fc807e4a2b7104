#pragma once

#include <cstdint>
#include <string>

#include "wlab/relation_io.hpp"

namespace wlab::cli {

enum Exit : int { kOk = 0, kIoParse = 1, kCertification = 2, kNoConvergence = 3 };

struct Context {
  Json config;
  std::string out_dir;
  std::uint64_t seed = 0;
};

int cmd_certify(const Context& ctx);
int cmd_solve(const Context& ctx);
int cmd_revolve(const Context& ctx);
int cmd_diagram(const Context& ctx);
int cmd_parallel(const Context& ctx);
int cmd_linop(const Context& ctx);
int cmd_blowup(const Context& ctx);

/// Writes `j` (keys sorted) to out_dir/name.
void write_json(const Context& ctx, const std::string& name, const Json& j);

}  // namespace wlab::cli
