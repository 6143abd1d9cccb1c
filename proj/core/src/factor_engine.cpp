#include "qfactor/factor_engine.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>
#include <thread>

#include "qfactor/error.hpp"
#include "qfactor/revival.hpp"

namespace qfactor {

namespace {

std::int64_t ceil_sqrt(std::int64_t n) {
  auto s = static_cast<std::int64_t>(std::sqrt(static_cast<double>(n)));
  while (s * s < n) ++s;
  while (s > 0 && (s - 1) * (s - 1) >= n) --s;
  return s;
}

std::int64_t floor_sqrt(std::int64_t n) {
  const std::int64_t s = ceil_sqrt(n);
  return s * s == n ? s : s - 1;
}

struct Detection {
  std::vector<Candidate> candidates;
  // Every ell <= sqrt(N) was examined, so an empty result certifies N prime.
  bool exhaustive = false;
  std::vector<ScanRecord> scan;
};

class Resolver {
 public:
  Resolver(Method method, const FactorOptions& options) : method_(method), options_(options) {}

  Detection detect(std::int64_t c) const {
    if (c < 4) return {{}, true, {}};
    if (method_ == Method::curlicue) {
      return {curlicue_factor(c, options_.threshold, options_.curlicue_budget), true, {}};
    }
    std::int64_t upper = std::min(ceil_sqrt(c), c - 1);
    if (options_.lmax) upper = std::min(upper, *options_.lmax);
    std::vector<std::int64_t> ells;
    for (std::int64_t ell = 2; ell <= upper; ++ell) ells.push_back(ell);
    Detection out;
    out.exhaustive = upper >= floor_sqrt(c);
    if (ells.empty()) return out;
    out.scan = scan_revival(c, options_.delta_n, ells, options_.window_halfwidth,
                            options_.samples, options_.threads, options_.term_budget);
    out.candidates = detect_candidates(out.scan, c, options_.threshold);
    for (auto& rec : out.scan) {
      rec.flagged = static_cast<double>(c) * rec.center_value >= options_.threshold;
    }
    return out;
  }

  // Appends the primes of c found by the detector; returns the unresolved part.
  std::int64_t solve(std::int64_t c) {
    if (c == 1) return 1;
    return split(c, detect(c));
  }

  std::int64_t split(std::int64_t c, const Detection& detection) {
    std::vector<std::int64_t> parts;
    std::int64_t rest = c;
    for (const auto& cand : detection.candidates) {
      const std::int64_t d = gcd(cand.ell, rest);
      if (d > 1 && rest % d == 0) {
        parts.push_back(d);
        rest /= d;
      }
    }
    if (parts.empty()) {
      if (detection.exhaustive) {
        primes_.push_back(c);
        return 1;
      }
      return c;
    }
    std::int64_t unresolved = 1;
    for (std::int64_t d : parts) unresolved *= solve(d);
    unresolved *= solve(rest);
    return unresolved;
  }

  std::vector<std::int64_t>& primes() { return primes_; }

 private:
  Method method_;
  const FactorOptions& options_;
  std::vector<std::int64_t> primes_;
};

std::int64_t strip_twos(std::int64_t n, std::vector<std::int64_t>& primes) {
  while (n % 2 == 0) {
    primes.push_back(2);
    n /= 2;
  }
  return n;
}

FactorReport finish(std::int64_t N, Method method, std::vector<Candidate> candidates,
                    std::vector<std::int64_t> primes, std::int64_t unresolved) {
  FactorReport report;
  report.N = N;
  report.method = method;
  report.candidates = std::move(candidates);
  std::sort(primes.begin(), primes.end());
  report.confirmed_factors = std::move(primes);
  report.cofactor = unresolved;
  report.complete = unresolved == 1;
  return report;
}

}  // namespace

std::string_view to_string(Method method) {
  switch (method) {
    case Method::revival:
      return "revival";
    case Method::curlicue:
      return "curlicue";
    case Method::trial_division:
      return "trial_division";
  }
  return "unknown";
}

std::optional<Method> parse_method(std::string_view name) {
  if (name == "revival") return Method::revival;
  if (name == "curlicue") return Method::curlicue;
  if (name == "trial_division" || name == "trial-division") return Method::trial_division;
  return std::nullopt;
}

double auto_delta_n(std::int64_t N) {
  return 4.0 * static_cast<double>(N) / (2.0 * std::numbers::pi);
}

std::vector<ScanRecord> scan_revival(std::int64_t N, std::optional<double> delta_n,
                                     std::span<const std::int64_t> ells, double window_halfwidth,
                                     int samples, unsigned threads, std::uint64_t term_budget) {
  if (N < 2) throw DomainError("scan_revival: N must be >= 2");
  if (samples < 1 || samples % 2 == 0) {
    throw DomainError("scan_revival: samples must be a positive odd integer");
  }
  if (!(window_halfwidth >= 0.0) || !std::isfinite(window_halfwidth)) {
    throw DomainError("scan_revival: window halfwidth must be finite and non-negative");
  }
  for (std::int64_t ell : ells) {
    if (ell < 2 || ell > N) {
      throw DomainError("scan_revival: ell=" + std::to_string(ell) + " outside [2, N]");
    }
  }
  const RevivalParams params = RevivalParams::gaussian(N, delta_n.value_or(auto_delta_n(N)));
  const long double work = static_cast<long double>(ells.size()) * samples *
                           static_cast<long double>(params.weight.terms.size());
  if (work > static_cast<long double>(term_budget)) {
    throw ResourceError("scan_revival: " + std::to_string(static_cast<double>(work)) +
                        " term evaluations exceed budget " + std::to_string(term_budget));
  }

  const int centre = (samples - 1) / 2;
  std::vector<double> offsets(static_cast<std::size_t>(samples));
  for (int k = 0; k < samples; ++k) {
    offsets[static_cast<std::size_t>(k)] =
        centre == 0 ? 0.0 : (k - centre) * (window_halfwidth / centre);
  }

  std::vector<ScanRecord> records(ells.size());
  auto evaluate = [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      const auto values = autocorrelation_window(params, ells[i], offsets);
      ScanRecord& rec = records[i];
      rec.ell = ells[i];
      rec.window.reserve(values.size());
      for (std::size_t k = 0; k < values.size(); ++k) {
        rec.window.emplace_back(offsets[k], std::norm(values[k]));
      }
      rec.center_value = rec.window[static_cast<std::size_t>(centre)].second;
    }
  };

  const std::size_t workers = std::clamp<std::size_t>(threads, 1, std::max<std::size_t>(1, ells.size()));
  if (workers == 1) {
    evaluate(0, ells.size());
  } else {
    std::vector<std::jthread> pool;
    const std::size_t chunk = (ells.size() + workers - 1) / workers;
    for (std::size_t begin = 0; begin < ells.size(); begin += chunk) {
      pool.emplace_back(evaluate, begin, std::min(ells.size(), begin + chunk));
    }
  }
  return records;
}

std::vector<Candidate> detect_candidates(std::span<const ScanRecord> scan, std::int64_t N,
                                         double threshold) {
  std::vector<Candidate> out;
  for (const auto& rec : scan) {
    const double score = static_cast<double>(N) * rec.center_value;
    if (score >= threshold) out.push_back({rec.ell, score});
  }
  return out;
}

bool center_is_local_maximum(const ScanRecord& record) {
  const std::size_t c = record.window.size() / 2;
  const double v = record.window[c].second;
  const bool left = c == 0 || v >= record.window[c - 1].second;
  const bool right = c + 1 >= record.window.size() || v >= record.window[c + 1].second;
  return left && right;
}

std::vector<Candidate> curlicue_factor(std::int64_t N, double threshold, std::uint64_t max_terms) {
  if (N < 3) throw DomainError("curlicue_factor: N must be >= 3");
  const CurlicueSeries series = curlicue_series(N, max_terms);
  std::vector<Candidate> minimal;
  const double dN = static_cast<double>(N);
  for (std::int64_t n = 1; n < N; ++n) {
    const double score = std::norm(series.values[static_cast<std::size_t>(n)]) / dN;
    if (score < threshold) continue;
    const bool multiple = std::any_of(minimal.begin(), minimal.end(),
                                      [n](const Candidate& c) { return n % c.ell == 0; });
    if (!multiple) minimal.push_back({n, score});
  }
  return minimal;
}

FactorReport confirm_and_recurse(std::span<const Candidate> candidates, std::int64_t N,
                                 Method method, const FactorOptions& options) {
  if (N < 2) throw DomainError("confirm_and_recurse: N must be >= 2");
  if (method == Method::trial_division) {
    return finish(N, method, {candidates.begin(), candidates.end()}, trial_division(N), 1);
  }
  Resolver resolver(method, options);
  const std::int64_t odd = strip_twos(N, resolver.primes());
  // Externally supplied candidates carry no coverage guarantee; if they
  // yield nothing, the detector is rerun on the odd part.
  const Detection given{{candidates.begin(), candidates.end()}, false, {}};
  const std::int64_t unresolved = odd == 1 ? 1 : resolver.split(odd, given);
  const std::int64_t remaining = unresolved == odd && odd > 1 ? resolver.solve(odd) : unresolved;
  return finish(N, method, {candidates.begin(), candidates.end()},
                std::move(resolver.primes()), remaining);
}

FactorReport factorize(std::int64_t N, Method method, const FactorOptions& options) {
  if (N < 2) throw DomainError("factorize: N must be >= 2, got " + std::to_string(N));
  if (method == Method::trial_division) return finish(N, method, {}, trial_division(N), 1);

  Resolver resolver(method, options);
  const std::int64_t odd = strip_twos(N, resolver.primes());
  Detection top = odd == 1 ? Detection{{}, true, {}} : resolver.detect(odd);
  const std::int64_t unresolved = odd == 1 ? 1 : resolver.split(odd, top);
  FactorReport report =
      finish(N, method, std::move(top.candidates), std::move(resolver.primes()), unresolved);
  report.scan = std::move(top.scan);
  return report;
}

std::vector<std::int64_t> trial_division(std::int64_t N) {
  if (N < 2) throw DomainError("trial_division: N must be >= 2");
  std::vector<std::int64_t> primes;
  std::int64_t n = N;
  for (std::int64_t p = 2; p <= n / p; p += (p == 2 ? 1 : 2)) {
    while (n % p == 0) {
      primes.push_back(p);
      n /= p;
    }
  }
  if (n > 1) primes.push_back(n);
  return primes;
}

}  // namespace qfactor
