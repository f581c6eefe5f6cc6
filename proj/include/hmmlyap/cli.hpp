#pragma once

#include <string>
#include <vector>

namespace hmmlyap {

// Subcommand dispatch: check, simulate, lyapunov, decay, rates, verify,
// perturb-sweep. Exit codes: 0 success, 1 usage or module error, 2 hypothesis
// failure in `check`, 3 verification failure in `verify`. Every artifact
// embeds the effective config; the output directory comes from --out, else
// HMMLYAP_OUT_DIR, else the config, else ".".
int run_cli(int argc, char** argv);
int run_cli(const std::vector<std::string>& args);

} // namespace hmmlyap
