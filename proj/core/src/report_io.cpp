#include "qfactor/report_io.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <ostream>

#include "json.hpp"

namespace qfactor {

std::string format_real(double value) {
  std::array<char, 32> buf{};
  const auto res =
      std::to_chars(buf.data(), buf.data() + buf.size(), value, std::chars_format::general, 17);
  return {buf.data(), res.ptr};
}

std::string to_json(const FactorReport& report, int indent) {
  nlohmann::ordered_json j;
  j["N"] = report.N;
  j["method"] = std::string(to_string(report.method));
  j["candidates"] = nlohmann::ordered_json::array();
  for (const auto& c : report.candidates) {
    j["candidates"].push_back({{"ell", c.ell}, {"score", c.score}});
  }
  auto factors = report.confirmed_factors;
  std::sort(factors.begin(), factors.end());
  j["confirmed_factors"] = factors;
  j["complete"] = report.complete;
  j["cofactor"] = report.cofactor;
  j["scan"] = nlohmann::ordered_json::array();
  for (const auto& rec : report.scan) {
    nlohmann::ordered_json window = nlohmann::ordered_json::array();
    for (const auto& [offset, value] : rec.window) window.push_back({offset, value});
    j["scan"].push_back({{"ell", rec.ell},
                         {"center_value", rec.center_value},
                         {"window", std::move(window)},
                         {"flagged", rec.flagged}});
  }
  return j.dump(indent);
}

void write_scan_csv(std::ostream& out, const std::vector<ScanRecord>& scan) {
  out << "ell,delta_tau,S2\n";
  for (const auto& rec : scan) {
    for (const auto& [offset, value] : rec.window) {
      out << rec.ell << ',' << format_real(offset) << ',' << format_real(value) << '\n';
    }
  }
}

void write_carpet_csv(std::ostream& out, const WavePacketGrid& grid) {
  out << "x,t,density\n";
  for (std::size_t i = 0; i < grid.t_grid.size(); ++i) {
    for (std::size_t j = 0; j < grid.x_grid.size(); ++j) {
      out << format_real(grid.x_grid[j]) << ',' << format_real(grid.t_grid[i]) << ','
          << format_real(grid.at(i, j)) << '\n';
    }
  }
}

void write_carpet_pgm(std::ostream& out, const WavePacketGrid& grid) {
  const double peak = grid.density.empty()
                          ? 0.0
                          : *std::max_element(grid.density.begin(), grid.density.end());
  out << "P5\n" << grid.x_grid.size() << ' ' << grid.t_grid.size() << "\n255\n";
  for (double v : grid.density) {
    const double scaled = peak > 0.0 ? 255.0 * v / peak : 0.0;
    out.put(static_cast<char>(static_cast<unsigned char>(std::lround(std::clamp(scaled, 0.0, 255.0)))));
  }
}

}  // namespace qfactor
