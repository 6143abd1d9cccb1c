#include "cli.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <stdexcept>

#include "CLI11.hpp"
#include "json.hpp"
#include "qfactor/error.hpp"
#include "qfactor/factor_engine.hpp"
#include "qfactor/propagators.hpp"
#include "qfactor/quadratic_phase.hpp"
#include "qfactor/report_io.hpp"
#include "qfactor/revival.hpp"

namespace qfactor::cli {

namespace {

struct RunConfig {
  std::string config_path;
  unsigned threads = 1;
  std::string output_path;
  std::string format;

  // factor / autocorr / curlicue
  std::int64_t N = 0;
  std::string method = "revival";
  std::string delta_n = "auto";
  double window = 0.4;
  int samples = 21;
  double threshold = 1.5;
  std::int64_t lmax = 0;
  std::int64_t center = 0;
  double halfwidth = 0.4;

  // carpet
  std::string geometry = "box";
  double size = 1.0;
  double tmax = 1.0;
  std::size_t nx = 256;
  std::size_t nt = 256;
  double packet_center = 0.3;
  double packet_width = 0.05;
  int cutoff = 0;

  // gauss-sum / decompose
  std::int64_t r = 1;
  std::int64_t q = 0;
  double t = 0.0;
  std::int64_t rmax = 1;

  std::string outdir = ".";
};

const auto kOdd = CLI::Validator(
    [](std::string& s) -> std::string {
      try {
        const long v = std::stol(s);
        if (v >= 1 && v % 2 == 1) return {};
      } catch (const std::exception&) {
      }
      return "value must be a positive odd integer";
    },
    "ODD");

const auto kDeltaN = CLI::Validator(
    [](std::string& s) -> std::string {
      if (s == "auto") return {};
      try {
        std::size_t used = 0;
        const double v = std::stod(s, &used);
        if (used == s.size() && v > 0.0 && std::isfinite(v)) return {};
      } catch (const std::exception&) {
      }
      return "value must be 'auto' or a positive real";
    },
    "REAL|auto");

void add_output(CLI::App* sub, RunConfig& cfg, std::vector<std::string> formats,
                const std::string& default_format) {
  cfg.format.clear();
  sub->add_option("--output,-o", cfg.output_path, "Output file (default: standard output)");
  sub->add_option("--format", cfg.format, "Output format")
      ->check(CLI::IsMember(std::move(formats)))
      ->default_str(default_format);
}

std::unique_ptr<CLI::App> build_app(RunConfig& cfg) {
  auto app = std::make_unique<CLI::App>(
      "Quadratic-phase wave-packet dynamics and interference-based factorization", "qfactor");
  app->require_subcommand(1);
  // Global options may also follow the subcommand.
  app->fallthrough();
  app->add_option("--config", cfg.config_path,
                  "Flat key=value file of option defaults (command-line flags win)");
  app->add_option("--threads", cfg.threads, "Cap on library worker threads")
      ->check(CLI::Range(1u, 256u));

  auto* factor = app->add_subcommand("factor", "Factorize N with a revival or curlicue detector");
  factor->add_option("N", cfg.N, "Number to factorize")->required()->check(CLI::Range(
      std::int64_t{2}, std::int64_t{1} << 40));
  factor->add_option("--method", cfg.method, "Detector")
      ->check(CLI::IsMember({"revival", "curlicue", "trial-division"}));
  factor->add_option("--delta-n", cfg.delta_n, "Weight width, or auto = 4N/(2 pi)")
      ->check(kDeltaN);
  factor->add_option("--window", cfg.window, "Window half-width around each ell")
      ->check(CLI::Range(0.0, 0.5));
  factor->add_option("--samples", cfg.samples, "Samples per window (odd)")->check(kOdd);
  factor->add_option("--threshold", cfg.threshold, "Detection threshold on N|S|^2")
      ->check(CLI::PositiveNumber);
  factor->add_option("--lmax", cfg.lmax, "Largest ell to scan (default ceil(sqrt(N)))")
      ->check(CLI::Range(std::int64_t{2}, std::int64_t{1} << 40));
  add_output(factor, cfg, {"json", "csv"}, "json");

  auto* autocorr = app->add_subcommand("autocorr", "Sample |S_N(tau)|^2 around an integer");
  autocorr->add_option("N", cfg.N, "Ratio T/T_cl")->required()->check(CLI::Range(
      std::int64_t{2}, std::int64_t{1} << 40));
  autocorr->add_option("--center", cfg.center, "Integer ell at the window centre")
      ->required()
      ->check(CLI::Range(std::int64_t{0}, std::int64_t{1} << 50));
  autocorr->add_option("--halfwidth", cfg.halfwidth, "Window half-width")
      ->required()
      ->check(CLI::Range(0.0, 0.5));
  autocorr->add_option("--samples", cfg.samples, "Number of samples (odd)")
      ->required()
      ->check(kOdd);
  autocorr->add_option("--delta-n", cfg.delta_n, "Weight width, or auto")->check(kDeltaN);
  add_output(autocorr, cfg, {"csv", "json"}, "csv");

  auto* curlicue = app->add_subcommand("curlicue", "Curlicue sums s_N(n) for n = 0..N-1");
  curlicue->add_option("N", cfg.N, "Modulus")->required()->check(CLI::Range(
      std::int64_t{1}, std::int64_t{3162}));
  add_output(curlicue, cfg, {"csv", "json"}, "csv");

  auto* carpet = app->add_subcommand("carpet", "Quantum carpet |psi(x,t)|^2 of a Gaussian packet");
  carpet->add_option("--geometry", cfg.geometry, "box or talbot")
      ->required()
      ->check(CLI::IsMember({"box", "talbot"}));
  carpet->add_option("--size", cfg.size, "Box length L or grating period d")
      ->required()
      ->check(CLI::PositiveNumber);
  carpet->add_option("--tmax", cfg.tmax, "Final time in units of T")
      ->required()
      ->check(CLI::Range(0.0, 1e6));
  carpet->add_option("--nx", cfg.nx, "Spatial samples")->required()->check(CLI::Range(
      std::size_t{16}, std::size_t{1} << 16));
  carpet->add_option("--nt", cfg.nt, "Time samples")->required()->check(CLI::Range(
      std::size_t{2}, std::size_t{1} << 16));
  carpet->add_option("--packet-center", cfg.packet_center, "Packet centre as a fraction of size")
      ->check(CLI::Range(0.0, 1.0));
  carpet->add_option("--packet-width", cfg.packet_width,
                     "Packet density width as a fraction of size")
      ->check(CLI::Range(1e-3, 0.5));
  carpet->add_option("--cutoff", cfg.cutoff, "Mode cutoff (default: automatic)")
      ->check(CLI::Range(1, 1 << 14));
  add_output(carpet, cfg, {"csv", "pgm"}, "csv");

  auto* gauss = app->add_subcommand("gauss-sum", "Gauss sums W_m^(r) for m = 0..r-1");
  gauss->add_option("--r", cfg.r, "Denominator r")->required()->check(CLI::Range(
      std::int64_t{1}, std::int64_t{100000}));
  gauss->add_option("--q", cfg.q, "Numerator q")->required()->check(CLI::Range(
      std::int64_t{0}, std::int64_t{1} << 40));
  add_output(gauss, cfg, {"csv", "json"}, "csv");

  auto* decompose = app->add_subcommand("decompose", "Split t into (q/r) N + epsilon + delta_t");
  decompose->add_option("--t", cfg.t, "Time in classical periods")
      ->required()
      ->check(CLI::Range(-4.0e15, 4.0e15));
  decompose->add_option("--N", cfg.N, "Ratio T/T_cl")->required()->check(CLI::Range(
      std::int64_t{1}, std::int64_t{1} << 40));
  decompose->add_option("--rmax", cfg.rmax, "Largest denominator")->required()->check(CLI::Range(
      std::int64_t{1}, std::int64_t{1} << 40));
  add_output(decompose, cfg, {"json", "csv"}, "json");

  auto* figures = app->add_subcommand("figures", "Write the N=1309 and N=21 figure datasets");
  figures->add_option("--outdir", cfg.outdir, "Directory for fig1_N1309.csv and fig2_N21.csv");

  return app;
}

std::optional<double> parse_delta_n(const std::string& s) {
  if (s == "auto") return std::nullopt;
  return std::stod(s);
}

std::string format_of(const CLI::App& sub, const RunConfig& cfg) {
  if (!cfg.format.empty()) return cfg.format;
  return sub.get_option("--format")->get_default_str();
}

void write_complex_json(nlohmann::ordered_json& arr, const Complex& z) {
  arr.push_back({z.real(), z.imag()});
}

void cmd_factor(const RunConfig& cfg, const std::string& format, std::ostream& out) {
  FactorOptions options;
  options.delta_n = parse_delta_n(cfg.delta_n);
  options.window_halfwidth = cfg.window;
  options.samples = cfg.samples;
  options.threshold = cfg.threshold;
  if (cfg.lmax > 0) options.lmax = cfg.lmax;
  options.threads = cfg.threads;
  const Method method = *parse_method(cfg.method);
  const FactorReport report = factorize(cfg.N, method, options);
  if (format == "csv") {
    write_scan_csv(out, report.scan);
  } else {
    out << to_json(report) << '\n';
  }
}

void cmd_autocorr(const RunConfig& cfg, const std::string& format, std::ostream& out) {
  const double dn = parse_delta_n(cfg.delta_n).value_or(auto_delta_n(cfg.N));
  const RevivalParams params = RevivalParams::gaussian(cfg.N, dn);
  const int centre = (cfg.samples - 1) / 2;
  std::vector<double> offsets(static_cast<std::size_t>(cfg.samples));
  for (int k = 0; k < cfg.samples; ++k) {
    offsets[static_cast<std::size_t>(k)] = centre == 0 ? 0.0 : (k - centre) * (cfg.halfwidth / centre);
  }
  const auto values = autocorrelation_window(params, cfg.center, offsets);
  if (format == "json") {
    nlohmann::ordered_json j;
    j["N"] = cfg.N;
    j["delta_n"] = dn;
    j["center"] = cfg.center;
    j["samples"] = nlohmann::ordered_json::array();
    for (std::size_t k = 0; k < values.size(); ++k) {
      j["samples"].push_back({{"delta_tau", offsets[k]},
                              {"re", values[k].real()},
                              {"im", values[k].imag()},
                              {"S2", std::norm(values[k])}});
    }
    out << j.dump(2) << '\n';
    return;
  }
  out << "delta_tau,tau,re,im,S2\n";
  for (std::size_t k = 0; k < values.size(); ++k) {
    out << format_real(offsets[k]) << ',' << format_real(static_cast<double>(cfg.center) + offsets[k])
        << ',' << format_real(values[k].real()) << ',' << format_real(values[k].imag()) << ','
        << format_real(std::norm(values[k])) << '\n';
  }
}

void cmd_curlicue(const RunConfig& cfg, const std::string& format, std::ostream& out) {
  const CurlicueSeries series = curlicue_series(cfg.N);
  if (format == "json") {
    nlohmann::ordered_json j;
    j["N"] = cfg.N;
    j["values"] = nlohmann::ordered_json::array();
    for (const auto& z : series.values) write_complex_json(j["values"], z);
    out << j.dump(2) << '\n';
    return;
  }
  out << "n,re,im,magnitude\n";
  for (std::size_t n = 0; n < series.values.size(); ++n) {
    const Complex& z = series.values[n];
    out << n << ',' << format_real(z.real()) << ',' << format_real(z.imag()) << ','
        << format_real(std::abs(z)) << '\n';
  }
}

void cmd_carpet(const RunConfig& cfg, const std::string& format, std::ostream& out) {
  const bool box = cfg.geometry == "box";
  PropagatorConfig config = box ? PropagatorConfig::box(cfg.size, 1) : PropagatorConfig::talbot(cfg.size, 1);
  const double centre = cfg.packet_center * cfg.size;
  const double width = cfg.packet_width * cfg.size;
  const auto packet_grid =
      box ? uniform_grid(0.0, cfg.size, 2049, true)
          : uniform_grid(centre - 0.5 * cfg.size, centre + 0.5 * cfg.size, 1024, false);
  WavePacket packet = gaussian_packet(packet_grid, centre, width);
  if (box) {
    // The Gaussian tails are clipped by the walls; zero them exactly.
    packet.amplitude.front() = packet.amplitude.back() = Complex{};
  }
  config.mode_cutoff = cfg.cutoff > 0 ? cfg.cutoff : suggest_mode_cutoff(packet, config, 1e-12, 1024);
  const auto times = uniform_grid(0.0, cfg.tmax, cfg.nt, true);
  const WavePacketGrid grid = carpet_grid(packet, config, times, cfg.nx);
  if (format == "pgm") {
    write_carpet_pgm(out, grid);
  } else {
    write_carpet_csv(out, grid);
  }
}

void cmd_gauss_sum(const RunConfig& cfg, const std::string& format, std::ostream& out) {
  const GaussSumTable table = gauss_sum_table(cfg.r, cfg.q);
  if (format == "json") {
    nlohmann::ordered_json j;
    j["r"] = table.r;
    j["q"] = table.q;
    j["values"] = nlohmann::ordered_json::array();
    for (const auto& z : table.values) write_complex_json(j["values"], z);
    out << j.dump(2) << '\n';
    return;
  }
  out << "m,re,im,abs\n";
  for (std::size_t m = 0; m < table.values.size(); ++m) {
    const Complex& z = table.values[m];
    out << m << ',' << format_real(z.real()) << ',' << format_real(z.imag()) << ','
        << format_real(std::abs(z)) << '\n';
  }
}

void cmd_decompose(const RunConfig& cfg, const std::string& format, std::ostream& out) {
  const RealTimeDecomposition d = decompose_real_time(cfg.t, cfg.N, cfg.rmax);
  if (format == "csv") {
    out << "t,N,q,r,epsilon,delta_t\n"
        << format_real(cfg.t) << ',' << cfg.N << ',' << d.fraction.q << ',' << d.fraction.r << ','
        << format_real(d.fraction.epsilon) << ',' << format_real(d.delta_t) << '\n';
    return;
  }
  nlohmann::ordered_json j;
  j["t"] = cfg.t;
  j["N"] = cfg.N;
  j["rmax"] = cfg.rmax;
  j["q"] = d.fraction.q;
  j["r"] = d.fraction.r;
  j["epsilon"] = d.fraction.epsilon;
  j["delta_t"] = d.delta_t;
  out << j.dump(2) << '\n';
}

// Adds "--key value" for config-file keys the command line left unset.
std::vector<std::string> merge_config(const CLI::App& app, const CLI::App& sub,
                                      const std::string& path, std::vector<std::string> args) {
  std::ifstream in(path);
  if (!in) throw CLI::ValidationError("--config", "cannot read config file " + path);
  std::string line;
  int lineno = 0;
  std::vector<std::string> extra_global;
  std::vector<std::string> extra_sub;
  while (std::getline(in, line)) {
    ++lineno;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#' || line[first] == ';') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw CLI::ValidationError("--config", path + ":" + std::to_string(lineno) +
                                                 ": expected key=value");
    }
    auto trim = [](std::string s) {
      const auto a = s.find_first_not_of(" \t\r");
      const auto b = s.find_last_not_of(" \t\r");
      return a == std::string::npos ? std::string{} : s.substr(a, b - a + 1);
    };
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    const std::string flag = "--" + key;
    if (key == "config") {
      throw CLI::ValidationError("--config", "config files cannot include other config files");
    }
    if (const CLI::Option* opt = sub.get_option_no_throw(flag)) {
      if (opt->count() == 0) {
        extra_sub.push_back(flag);
        extra_sub.push_back(value);
      }
    } else if (const CLI::Option* gopt = app.get_option_no_throw(flag)) {
      if (gopt->count() == 0) {
        extra_global.push_back(flag);
        extra_global.push_back(value);
      }
    } else {
      throw CLI::ValidationError("--config", path + ":" + std::to_string(lineno) +
                                                 ": unknown key '" + key + "' for command " +
                                                 sub.get_name());
    }
  }
  args.insert(args.begin(), extra_global.begin(), extra_global.end());
  args.insert(args.end(), extra_sub.begin(), extra_sub.end());
  return args;
}

void parse_into(CLI::App& app, std::vector<std::string> args) {
  std::reverse(args.begin(), args.end());
  app.parse(args);
}

}  // namespace

void emit_figure_datasets(const std::filesystem::path& dir, unsigned threads) {
  std::filesystem::create_directories(dir);
  {
    const std::vector<std::int64_t> ells = {2, 3, 5, 7, 11, 13, 14, 17, 19};
    const auto scan = scan_revival(1309, 250.0, ells, 0.4, 801, threads);
    std::ofstream f(dir / "fig1_N1309.csv");
    if (!f) throw std::runtime_error("cannot write " + (dir / "fig1_N1309.csv").string());
    write_scan_csv(f, scan);
    if (!f) throw std::runtime_error("write failed for fig1_N1309.csv");
  }
  {
    const CurlicueSeries series = curlicue_series(21);
    std::ofstream f(dir / "fig2_N21.csv");
    if (!f) throw std::runtime_error("cannot write " + (dir / "fig2_N21.csv").string());
    f << "n,abs_re,abs_im\n";
    for (std::size_t n = 0; n < series.values.size(); ++n) {
      f << n << ',' << format_real(std::abs(series.values[n].real())) << ','
        << format_real(std::abs(series.values[n].imag())) << '\n';
    }
    if (!f) throw std::runtime_error("write failed for fig2_N21.csv");
  }
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  RunConfig cfg;
  auto app = build_app(cfg);
  try {
    parse_into(*app, args);
    if (!cfg.config_path.empty()) {
      const auto merged = merge_config(*app, *app->get_subcommands().front(), cfg.config_path, args);
      cfg = RunConfig{};
      app = build_app(cfg);
      parse_into(*app, merged);
    }
  } catch (const CLI::CallForHelp& e) {
    return app->exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app->exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app->exit(e, out, err);
    return kUsageError;
  }

  const CLI::App& sub = *app->get_subcommands().front();
  const std::string name = sub.get_name();
  try {
    if (name == "figures") {
      emit_figure_datasets(cfg.outdir, cfg.threads);
      return kOk;
    }
    const std::string format = sub.get_option_no_throw("--format") ? format_of(sub, cfg) : "";
    std::ostringstream buffer;
    if (name == "factor") {
      cmd_factor(cfg, format, buffer);
    } else if (name == "autocorr") {
      cmd_autocorr(cfg, format, buffer);
    } else if (name == "curlicue") {
      cmd_curlicue(cfg, format, buffer);
    } else if (name == "carpet") {
      cmd_carpet(cfg, format, buffer);
    } else if (name == "gauss-sum") {
      cmd_gauss_sum(cfg, format, buffer);
    } else if (name == "decompose") {
      cmd_decompose(cfg, format, buffer);
    }
    if (cfg.output_path.empty()) {
      out << buffer.str();
    } else {
      std::ofstream f(cfg.output_path, std::ios::binary);
      if (!f) throw std::runtime_error("cannot open output file " + cfg.output_path);
      f << buffer.str();
      if (!f) throw std::runtime_error("write failed for " + cfg.output_path);
    }
    return kOk;
  } catch (const DomainError& e) {
    err << "qfactor " << name << ": invalid input: " << e.what() << '\n';
    return kUsageError;
  } catch (const std::exception& e) {
    err << "qfactor " << name << ": " << e.what() << '\n';
    return kComputationError;
  }
}

}  // namespace qfactor::cli
