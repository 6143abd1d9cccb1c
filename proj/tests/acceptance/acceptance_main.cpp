// Acceptance runner: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails. Detail lines are indented under their criterion.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "cli.hpp"
#include "json.hpp"
#include "oracles.hpp"
#include "qfactor/factor_engine.hpp"
#include "qfactor/propagators.hpp"
#include "qfactor/quadratic_phase.hpp"
#include "qfactor/revival.hpp"

namespace {

using qfactor::Complex;
constexpr double kPi = std::numbers::pi;

struct Outcome {
  bool pass = true;
  std::vector<std::string> details;

  void require(bool ok, const std::string& what) {
    if (!ok) pass = false;
    details.push_back(std::string(ok ? "ok   " : "FAIL ") + what);
  }
  void note(const std::string& what) { details.push_back("info " + what); }
};

std::string fmt(double v, int digits = 4) {
  std::ostringstream os;
  os.precision(digits);
  os << v;
  return os.str();
}

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

// ---------------------------------------------------------------- 1
Outcome fig1_reproduction() {
  Outcome o;
  const std::int64_t N = 1309;
  const std::vector<std::int64_t> ells = {2, 3, 5, 7, 11, 13, 17, 19};
  const auto start = Clock::now();
  const auto scan = qfactor::scan_revival(N, 250.0, ells, 0.4, 801, 1);
  const double elapsed = seconds_since(start);

  std::vector<std::int64_t> central;
  for (const auto& rec : scan) {
    const double score = static_cast<double>(N) * rec.center_value;
    const bool is_factor = N % rec.ell == 0;
    const bool centre_max = qfactor::center_is_local_maximum(rec) && score >= 1.5;
    if (centre_max) central.push_back(rec.ell);

    std::size_t arg = 0;
    for (std::size_t k = 1; k < rec.window.size(); ++k) {
      if (rec.window[k].second > rec.window[arg].second) arg = k;
    }
    const std::string where = "window max at dtau=" + fmt(rec.window[arg].first, 6) +
                              " (N|S|^2=" + fmt(static_cast<double>(N) * rec.window[arg].second) + ")";
    if (is_factor) {
      const auto g = static_cast<double>(rec.ell);
      o.require(std::abs(score - g) <= 0.25 * g,
                "ell=" + std::to_string(rec.ell) + " score " + fmt(score) + " within 25% of " +
                    std::to_string(rec.ell) + "; " + where);
    } else {
      o.require(score <= 1.5, "ell=" + std::to_string(rec.ell) + " score " + fmt(score) +
                                  " <= 1.5; " + where);
    }
  }
  std::string got;
  for (auto e : central) got += std::to_string(e) + " ";
  o.require(central == std::vector<std::int64_t>{7, 11, 17},
            "central maxima (local maximum at dtau=0 above threshold) = { " + got + "}, want {7 11 17}");
  o.require(elapsed <= 60.0, "runtime " + fmt(elapsed, 3) + " s <= 60 s");

  // Same scan at the automatic width, for comparison.
  const auto wide = qfactor::scan_revival(N, std::nullopt, ells, 0.0, 1, 1);
  std::string scores;
  for (const auto& rec : wide) {
    scores += std::to_string(rec.ell) + ":" + fmt(static_cast<double>(N) * rec.center_value) + " ";
  }
  o.note("scores at delta_n = 4N/(2 pi) = " + fmt(qfactor::auto_delta_n(N), 6) + ": " + scores);
  return o;
}

// ---------------------------------------------------------------- 2
std::vector<std::int64_t> cli_factors(const std::vector<std::string>& args, Outcome& o,
                                      double& elapsed) {
  std::ostringstream out;
  std::ostringstream err;
  const auto start = Clock::now();
  const int code = qfactor::cli::run(args, out, err);
  elapsed = seconds_since(start);
  std::string cmd;
  for (const auto& a : args) cmd += a + " ";
  o.require(code == 0, cmd + "exits 0 (got " + std::to_string(code) + ") " + err.str());
  if (code != 0) return {};
  const auto j = nlohmann::json::parse(out.str());
  o.require(j["complete"].get<bool>(), cmd + "reports complete");
  return j["confirmed_factors"].get<std::vector<std::int64_t>>();
}

Outcome full_factorization() {
  Outcome o;
  double t = 0.0;
  const auto f1309 = cli_factors({"factor", "1309"}, o, t);
  o.require(f1309 == qfactor::trial_division(1309) && f1309 == std::vector<std::int64_t>{7, 11, 17},
            "factor 1309 -> {7, 11, 17} matches trial division");
  o.require(t <= 60.0, "factor 1309 runtime " + fmt(t, 3) + " s <= 60 s");
  const auto f21 = cli_factors({"factor", "21", "--method", "curlicue"}, o, t);
  o.require(f21 == qfactor::trial_division(21) && f21 == std::vector<std::int64_t>{3, 7},
            "factor 21 --method curlicue -> {3, 7} matches trial division");
  o.require(t <= 60.0, "factor 21 runtime " + fmt(t, 3) + " s <= 60 s");
  return o;
}

// ---------------------------------------------------------------- 3
Outcome fig2_reproduction() {
  Outcome o;
  const auto start = Clock::now();
  const auto series = qfactor::curlicue_series(21);
  const double elapsed = seconds_since(start);
  for (std::int64_t n = 0; n < 21; ++n) {
    const double im = std::abs(series.values[static_cast<std::size_t>(n)].imag());
    const double oracle_im = std::abs(oracle::curlicue(21, n).imag());
    const bool multiple = n != 0 && (n % 3 == 0 || n % 7 == 0);
    const bool ok = multiple ? im > 5.0 : im < 1e-6;
    o.require(ok && (multiple ? oracle_im > 5.0 : oracle_im < 1e-6),
              "n=" + std::to_string(n) + " |Im s| = " + fmt(im, 6) +
                  (multiple ? " > 5" : " < 1e-6"));
  }
  o.require(elapsed < 1.0, "runtime " + fmt(elapsed, 3) + " s < 1 s");
  return o;
}

// ---------------------------------------------------------------- 4
Outcome decomposition_identity() {
  Outcome o;
  std::mt19937_64 rng(4);
  std::uniform_int_distribution<std::int64_t> n_dist(2, 500);
  std::uniform_real_distribution<double> dn_dist(10.0, 100.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const auto start = Clock::now();
  double worst = 0.0;
  int failures = 0;
  std::int64_t max_r = 0;
  for (int i = 0; i < 200; ++i) {
    const auto N = n_dist(rng);
    const double dn = dn_dist(rng);
    const double t = unit(rng) * static_cast<double>(N);
    const auto d = qfactor::decompose_real_time(t, N, 50);
    const auto params = qfactor::RevivalParams::gaussian(N, dn);
    const Complex sum = qfactor::decomposition_sum(params, d.fraction, d.delta_t);
    const Complex direct = oracle::autocorrelation(N, dn, static_cast<long double>(t));
    const double err = std::abs(sum - direct);
    worst = std::max(worst, err);
    max_r = std::max(max_r, d.fraction.r);
    if (!(err <= 1e-6) || std::abs(d.delta_t) > 0.5) {
      ++failures;
      o.note("draw " + std::to_string(i) + ": N=" + std::to_string(N) + " dn=" + fmt(dn) +
             " t=" + fmt(t, 17) + " err=" + fmt(err));
    }
  }
  const double elapsed = seconds_since(start);
  o.require(failures == 0, "200 draws, worst |sum - S(t)| = " + fmt(worst) + " <= 1e-6 (largest r " +
                               std::to_string(max_r) + ")");
  o.require(elapsed <= 120.0, "runtime " + fmt(elapsed, 3) + " s <= 120 s");
  return o;
}

// ---------------------------------------------------------------- 5
Outcome shape_function_oracle() {
  Outcome o;
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<std::int64_t> n_dist(2, 500);
  std::uniform_real_distribution<double> dn_dist(10.0, 100.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_int_distribution<int> jitter(-3, 3);
  const auto start = Clock::now();
  double worst = 0.0;
  int failures = 0;
  for (int i = 0; i < 100; ++i) {
    const auto N = n_dist(rng);
    const auto params = qfactor::RevivalParams::gaussian(N, dn_dist(rng));
    const auto d = qfactor::decompose_real_time(unit(rng) * static_cast<double>(N), N, 50);
    const std::int64_t m =
        static_cast<std::int64_t>(std::lround(static_cast<double>(d.fraction.r) * d.delta_t)) +
        jitter(rng);
    const Complex quad = qfactor::shape_function_quadrature(m, d.fraction, d.delta_t, params);
    const Complex closed = qfactor::shape_function_closed(m, d.fraction, d.delta_t, params).amplitude;
    const double err = std::abs(quad - closed);
    worst = std::max(worst, err);
    if (!(err <= 1e-6)) {
      ++failures;
      o.note("draw " + std::to_string(i) + ": N=" + std::to_string(N) + " m=" + std::to_string(m) +
             " err=" + fmt(err));
    }
  }
  const double elapsed = seconds_since(start);
  o.require(failures == 0, "100 draws, worst |closed - quadrature| = " + fmt(worst) + " <= 1e-6");
  o.require(elapsed <= 30.0, "runtime " + fmt(elapsed, 3) + " s <= 30 s");
  return o;
}

// ---------------------------------------------------------------- 6
double overlap_fidelity(const qfactor::WavePacket& a, const qfactor::WavePacket& b, bool closed_ends) {
  Complex acc;
  double na = 0.0;
  double nb = 0.0;
  const std::size_t n = a.amplitude.size();
  for (std::size_t i = 0; i < n; ++i) {
    const double w = closed_ends && (i == 0 || i + 1 == n) ? 0.5 : 1.0;
    acc += w * std::conj(a.amplitude[i]) * b.amplitude[i];
    na += w * std::norm(a.amplitude[i]);
    nb += w * std::norm(b.amplitude[i]);
  }
  return std::norm(acc) / (na * nb);
}

Outcome propagator_properties() {
  using namespace qfactor;
  Outcome o;
  const auto start = Clock::now();

  // Talbot cell: period d, Gaussian of width d/20 centred in the cell.
  const double d = 1.0;
  const auto talbot = PropagatorConfig::talbot(d, 64);
  const auto partial =
      gaussian_packet(uniform_grid(0.0, d, 1024, false), 0.5 * d, d / 20.0);
  const auto x_cell = uniform_grid(0.0, d, 256, false);

  {
    const auto direct = propagate_talbot(partial, 0.13, talbot, TalbotForm::direct, x_cell);
    const auto spectral = propagate_talbot(partial, 0.13, talbot, TalbotForm::spectral, x_cell);
    const auto rd = direct.density();
    const auto rs = spectral.density();
    double diff = 0.0;
    for (std::size_t i = 0; i < rd.size(); ++i) diff = std::max(diff, std::abs(rd[i] - rs[i]));
    o.require(diff <= 1e-8, "(a) direct vs spectral density at t/T=0.13: " + fmt(diff) + " <= 1e-8");
  }
  {
    const auto box = PropagatorConfig::box(1.0, 256);
    auto packet = gaussian_packet(uniform_grid(0.0, 1.0, 2049, true), 0.5, 1.0 / 20.0);
    packet.amplitude.front() = packet.amplitude.back() = Complex{};
    const auto coeffs = box_expand(packet, box);
    const auto revived = propagate_box(coeffs, 1.0, box, packet.x);
    const double fb = overlap_fidelity(packet, revived, true);
    o.require(fb >= 1.0 - 1e-10, "(b) box revival fidelity 1 - " + fmt(1.0 - fb) + " >= 1 - 1e-10");

    const auto start_cell = propagate_talbot(partial, 0.0, talbot, TalbotForm::spectral, x_cell);
    const auto revived_cell = propagate_talbot(partial, 1.0, talbot, TalbotForm::spectral, x_cell);
    const double ft = overlap_fidelity(start_cell, revived_cell, false);
    o.require(ft >= 1.0 - 1e-10, "(b) talbot revival fidelity 1 - " + fmt(1.0 - ft) + " >= 1 - 1e-10");
  }
  {
    std::vector<double> shifted(x_cell.size());
    for (std::size_t i = 0; i < x_cell.size(); ++i) shifted[i] = x_cell[i] + 0.5 * d;
    const auto half = propagate_talbot(partial, 0.5, talbot, TalbotForm::spectral, x_cell).density();
    const auto moved = propagate_talbot(partial, 0.0, talbot, TalbotForm::direct, shifted).density();
    double diff = 0.0;
    for (std::size_t i = 0; i < half.size(); ++i) diff = std::max(diff, std::abs(half[i] - moved[i]));
    o.require(diff <= 1e-8, "(c) half-period density vs d/2 translate: " + fmt(diff) + " <= 1e-8");
  }
  {
    const auto box = PropagatorConfig::box(1.0, 256);
    std::mt19937_64 rng(6);
    std::uniform_real_distribution<double> pos(0.0, 1.0);
    std::uniform_real_distribution<double> time(0.0, 2.0);
    double worst = 0.0;
    for (int i = 0; i < 200; ++i) {
      const double x = pos(rng);
      const double y = pos(rng);
      const double t = i < 100 ? 0.3 : time(rng);
      worst = std::max(worst, std::abs(box_via_talbot(y, x, t, box) - box_green_function(y, x, t, box)));
    }
    o.require(worst <= 1e-8, "(d) box-via-talbot vs sine product, 200 points: " + fmt(worst) + " <= 1e-8");
  }
  const double elapsed = seconds_since(start);
  o.require(elapsed <= 60.0, "runtime " + fmt(elapsed, 3) + " s <= 60 s");
  return o;
}

// ---------------------------------------------------------------- 7
Outcome number_theory_laws() {
  Outcome o;
  const auto start = Clock::now();
  double worst_gauss = 0.0;
  std::size_t tables = 0;
  for (std::int64_t r = 1; r <= 199; r += 2) {
    const double want = 1.0 / std::sqrt(static_cast<double>(r));
    for (std::int64_t q = 1; q <= r; ++q) {
      if (qfactor::gcd(q, r) != 1) continue;
      const auto table = qfactor::gauss_sum_table(r, q);
      ++tables;
      for (const auto& v : table.values) worst_gauss = std::max(worst_gauss, std::abs(std::abs(v) - want));
    }
  }
  o.require(worst_gauss <= 1e-10, "|W_m^(r)| = 1/sqrt(r) over " + std::to_string(tables) +
                                      " tables (odd r <= 199, gcd(q,r)=1): worst " + fmt(worst_gauss));

  std::mt19937_64 rng(7);
  std::uniform_int_distribution<std::int64_t> half(0, 999);
  double worst_ratio = 0.0;
  bool curl_ok = true;
  for (int i = 0; i < 100; ++i) {
    const std::int64_t N = 2 * half(rng) + 1;
    const auto s = qfactor::curlicue_series(N);
    for (std::int64_t n = 0; n < N; ++n) {
      const double want = std::sqrt(static_cast<double>(N * oracle::gcd(n, N)));
      const double err = std::abs(std::abs(s.values[static_cast<std::size_t>(n)]) - want);
      worst_ratio = std::max(worst_ratio, err / static_cast<double>(N));
      if (!(err <= 1e-8 * static_cast<double>(N))) curl_ok = false;
    }
  }
  o.require(curl_ok, "|s_N(n)| = sqrt(N gcd(n,N)) for 100 odd N <= 2000: worst err/N " + fmt(worst_ratio) +
                         " <= 1e-8");
  const double elapsed = seconds_since(start);
  o.require(elapsed <= 60.0, "runtime " + fmt(elapsed, 3) + " s <= 60 s");
  return o;
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria = {
      {"revival scan N=1309, delta_n=250", fig1_reproduction},
      {"full factorization via CLI", full_factorization},
      {"curlicue imaginary structure N=21", fig2_reproduction},
      {"decomposition identity", decomposition_identity},
      {"shape function closed form vs quadrature", shape_function_oracle},
      {"propagator properties", propagator_properties},
      {"Gauss and curlicue magnitude laws", number_theory_laws},
  };

  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome outcome;
    try {
      outcome = criteria[i].run();
    } catch (const std::exception& e) {
      outcome.pass = false;
      outcome.details.push_back(std::string("FAIL exception: ") + e.what());
    }
    if (!outcome.pass) ++failed;
    std::cout << (outcome.pass ? "PASS" : "FAIL") << " criterion " << (i + 1) << ": "
              << criteria[i].name << '\n';
    for (const auto& line : outcome.details) std::cout << "    " << line << '\n';
    std::cout.flush();
  }
  std::cout << (criteria.size() - static_cast<std::size_t>(failed)) << "/" << criteria.size()
            << " criteria passed\n";
  return failed == 0 ? 0 : 1;
}
