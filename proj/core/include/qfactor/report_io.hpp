#pragma once

#include <iosfwd>
#include <string>

#include "qfactor/factor_engine.hpp"
#include "qfactor/propagators.hpp"

namespace qfactor {

/// "%.17g": round-trips every double.
[[nodiscard]] std::string format_real(double value);

/// JSON object with the FactorReport fields; factors ascending.
[[nodiscard]] std::string to_json(const FactorReport& report, int indent = 2);

/// Header "ell,delta_tau,S2" followed by one row per window sample.
void write_scan_csv(std::ostream& out, const std::vector<ScanRecord>& scan);

/// Header "x,t,density", one row per grid point, rows ordered by t then x.
void write_carpet_csv(std::ostream& out, const WavePacketGrid& grid);

/// Binary 8-bit PGM (P5): one image row per time, density scaled to the
/// grid maximum.
void write_carpet_pgm(std::ostream& out, const WavePacketGrid& grid);

}  // namespace qfactor
