#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace qfactor::cli {

enum ExitCode : int { kOk = 0, kComputationError = 1, kUsageError = 2 };

/// Parses args (without the program name), dispatches to the library and
/// writes results to --output or `out`. Diagnostics go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Writes fig1_N1309.csv (ell, delta_tau, S2) and fig2_N21.csv (n, abs_re,
/// abs_im) into dir.
void emit_figure_datasets(const std::filesystem::path& dir, unsigned threads = 1);

}  // namespace qfactor::cli
