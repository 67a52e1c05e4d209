#pragma once

#include "exi/rng.hpp"
#include "exi/types.hpp"

#include <string>
#include <vector>

namespace exi {

// ---------------------------------------------------------------------------
// Heavy-tailed innovations
// ---------------------------------------------------------------------------

enum class Innovation { frechet, pareto, student_t };

/// Innovation distribution plus its tail parameter: the Frechet / Pareto
/// shape alpha, or the Student-t degrees of freedom nu (tail index = nu).
struct InnovationSpec {
  Innovation kind = Innovation::frechet;
  double param = 1.0;

  double tail_index() const noexcept { return param; }
  bool symmetric() const noexcept { return kind == Innovation::student_t; }
  bool nonnegative() const noexcept { return kind != Innovation::student_t; }
};

/// Inverse CDFs, u in (0, 1): Frechet F(z) = exp(-z^-alpha) on z > 0,
/// Pareto F(z) = 1 - z^-alpha on z >= 1.
double frechet_quantile(double u, double alpha);
double pareto_quantile(double u, double alpha);

/// One draw. Student-t uses normal / sqrt(chi2_nu / nu); fractional nu is
/// fine (the chi-squared half-shape gamma uses the shape < 1 boost).
double sample_innovation(const InnovationSpec& spec, SplitMix64& rng);

// ---------------------------------------------------------------------------
// Processes with known extremal index
// ---------------------------------------------------------------------------

/// Deterministic filters, exposed so tests can drive them with known
/// innovation sequences.

/// X_t = max(b * X_{t-1}, (1-b) * z_t), X_0 = z_0; same length as z.
Series armax_recursion(double b, const Series& z);

/// Y_t = sum_j psi_j z_{t-j}; output length z.size() - (psi.size() - 1).
Series linear_filter(const std::vector<double>& psi, const Series& z);

/// X_t = max_i a_i z_{t-i+1}; output length z.size() - (a.size() - 1).
Series moving_max_filter(const std::vector<double>& a, const Series& z);

struct ProcessSpec {
  enum class Family { armax, linear, moving_max };

  Family family = Family::armax;
  double b = 0.0;                // armax memory, 0 <= b < 1
  double alpha = 1.0;            // armax Frechet innovation shape
  Index burn_in = 1000;          // armax warm-up steps dropped
  std::vector<double> coeffs;    // linear psi_0..psi_p / moving-max a_1..a_m
  InnovationSpec innovation;     // linear and moving-max only

  static ProcessSpec armax(double b, double alpha, Index burn_in = 1000);
  static ProcessSpec linear(std::vector<double> psi, InnovationSpec innovation);
  static ProcessSpec moving_max(std::vector<double> a, InnovationSpec innovation);

  /// Throws std::invalid_argument when parameters are out of range
  /// (moving-max coefficients must be positive and its innovations
  /// nonnegative; armax needs 0 <= b < 1 and alpha > 0).
  void validate() const;

  /// Short display label, e.g. "armax(b=0.5,alpha=1)".
  std::string label() const;
};

/// Simulates n observations; all randomness comes from SplitMix64(seed), so
/// paths are reproducible. Callers running replicates derive per-replicate
/// seeds with fold_in.
Series gen_process(const ProcessSpec& spec, Index n, std::uint64_t seed);

/// Closed-form extremal index: armax 1 - b^alpha; linear (only defined for
/// symmetric innovations) (psi_+^a + psi_-^a) / sum |psi_j|^a; moving max
/// max a_i^a / sum a_i^a, with a the innovation tail index.
double theoretical_theta(const ProcessSpec& spec);

}  // namespace exi
