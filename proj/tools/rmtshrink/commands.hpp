#pragma once

#include "run_context.hpp"

namespace rmtcli {

void cmd_density(RunContext& ctx);
void cmd_kernel(RunContext& ctx);
void cmd_shrink(RunContext& ctx);
void cmd_simulate(RunContext& ctx);

}  // namespace rmtcli
