#pragma once

/// @file
/// Integer factorization from interference structure: the revival detector
/// reads N |S_N(ell)|^2, which tracks gcd(ell, N); the curlicue detector
/// reads |s_N(n)|^2 / N, which tracks gcd(n, N). Candidates become divisors
/// only through exact gcd arithmetic, so a noisy detector can miss factors
/// but never report a wrong one.

#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

#include "qfactor/quadratic_phase.hpp"

namespace qfactor {

enum class Method { revival, curlicue, trial_division };

[[nodiscard]] std::string_view to_string(Method method);
[[nodiscard]] std::optional<Method> parse_method(std::string_view name);

struct ScanRecord {
  std::int64_t ell = 0;
  /// |S_N(ell)|^2, equal to the window sample at offset 0.
  double center_value = 0.0;
  /// (offset, |S_N(ell + offset)|^2), offsets ascending.
  std::vector<std::pair<double, double>> window;
  bool flagged = false;
};

struct Candidate {
  std::int64_t ell = 0;
  double score = 0.0;
};

struct FactorReport {
  std::int64_t N = 0;
  Method method = Method::revival;
  /// Detector output on the odd part of N.
  std::vector<Candidate> candidates;
  /// Prime factors with multiplicity, ascending.
  std::vector<std::int64_t> confirmed_factors;
  bool complete = false;
  /// N divided by the product of confirmed_factors; 1 when complete.
  std::int64_t cofactor = 1;
  /// Revival scan of the odd part of N (empty for other methods).
  std::vector<ScanRecord> scan;
};

struct FactorOptions {
  /// Weight width; unset selects auto_delta_n(N) for every stage.
  std::optional<double> delta_n;
  double window_halfwidth = 0.4;
  int samples = 21;
  double threshold = 1.5;
  /// Upper bound on scanned ell; unset scans up to ceil(sqrt(cofactor)).
  std::optional<std::int64_t> lmax;
  unsigned threads = 1;
  std::uint64_t term_budget = 1'000'000'000;
  std::uint64_t curlicue_budget = kDefaultCurlicueTermBudget;
};

/// Width 4 N / (2 pi): wide enough that the coprime baseline N |S_N(ell)|^2
/// sits at 1 to within about 1e-3.
[[nodiscard]] double auto_delta_n(std::int64_t N);

/// |S_N(ell + offset)|^2 on `samples` equally spaced offsets in
/// [-halfwidth, halfwidth]. samples must be odd so offset 0 is sampled.
/// Records come back in the order of ells whatever the thread count.
/// Throws DomainError for ell outside [2, N-1] (ell = N is accepted as the
/// full revival), ResourceError when ells * samples * weights > term_budget.
[[nodiscard]] std::vector<ScanRecord> scan_revival(std::int64_t N, std::optional<double> delta_n,
                                                   std::span<const std::int64_t> ells,
                                                   double window_halfwidth, int samples,
                                                   unsigned threads = 1,
                                                   std::uint64_t term_budget = 1'000'000'000);

/// Candidates with score N * center_value >= threshold.
[[nodiscard]] std::vector<Candidate> detect_candidates(std::span<const ScanRecord> scan,
                                                       std::int64_t N, double threshold = 1.5);

/// True when the centre sample is a local maximum of the sampled window.
[[nodiscard]] bool center_is_local_maximum(const ScanRecord& record);

/// n with |s_N(n)|^2 / N >= threshold, keeping only those not divisible by
/// a smaller flagged n. Throws DomainError for N < 3.
[[nodiscard]] std::vector<Candidate> curlicue_factor(
    std::int64_t N, double threshold = 1.5,
    std::uint64_t max_terms = kDefaultCurlicueTermBudget);

/// Turns detector candidates for N into a prime factorization. Factors of 2
/// are removed arithmetically first. Each candidate contributes
/// d = gcd(ell, cofactor) when d > 1; composite divisors and the remaining
/// cofactor are handled by re-running the detector of `method` on them. A
/// cofactor whose detector pass covered every ell <= sqrt(cofactor) without
/// a hit is accepted as prime; otherwise the report is left incomplete.
[[nodiscard]] FactorReport confirm_and_recurse(std::span<const Candidate> candidates,
                                               std::int64_t N, Method method,
                                               const FactorOptions& options = {});

/// Detector run on the odd part of N followed by confirm_and_recurse.
/// Throws DomainError for N < 2.
[[nodiscard]] FactorReport factorize(std::int64_t N, Method method,
                                     const FactorOptions& options = {});

/// Prime factors of N with multiplicity, ascending. Throws DomainError for N < 2.
[[nodiscard]] std::vector<std::int64_t> trial_division(std::int64_t N);

}  // namespace qfactor
