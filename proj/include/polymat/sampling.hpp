#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "polymat/bounds.hpp"
#include "polymat/polymatrix.hpp"

namespace polymat {

/// Counter-based generator: the state is a hash of (seed, stream, index), so
/// any (sample, copy) pair owns an independent substream and parallel order
/// cannot change the draws.
class Rng {
 public:
  Rng(std::uint64_t seed, std::uint64_t stream, std::uint64_t index);

  std::uint64_t next_u64();
  double next_double();    // [0, 1)
  double next_gaussian();  // Box-Muller, cached spare

 private:
  std::uint64_t state_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

double sample_scalar(const DistributionSpec& dist, Rng& rng);

/// n i.i.d. draws; identical (seed, stream) always yields the identical vector.
Vector sample_vector(const DistributionSpec& dist, int n, std::uint64_t seed,
                     std::uint64_t stream, std::uint64_t index = 0);

struct SampleConfig {
  DistributionSpec dist;
  int n = 0;
  std::int64_t samples = 1;
  std::uint64_t seed = 0;
  int t = 2;
};

struct MomentEstimate {
  double mean = 0.0;
  double se = 0.0;
  std::int64_t n_samples = 0;
  std::string quantity;
};

struct MomentRequest {
  int two_t = 4;            // Schatten order
  bool power_form = true;   // ||.||^{two_t} vs the norm itself
  bool centered = true;     // subtract E F before taking norms
};

/// Monte Carlo estimate of E ||F(x) - EF||_{2t}^{power}; per-sample values are
/// aggregated over a fixed pairwise tree, so estimates are bit-identical for
/// any worker count.
MomentEstimate estimate_moment(const PolyMatrix& f, const SampleConfig& cfg,
                               const MomentRequest& req, int threads = 0);

/// Same, for the decoupled evaluation over d independent copies.
MomentEstimate estimate_decoupled_moment(const PolyMatrix& f,
                                         const SampleConfig& cfg,
                                         const MomentRequest& req,
                                         int threads = 0);

/// Generic mean/stderr over user-supplied per-sample values (log-sum-exp
/// fallback keeps huge Schatten powers finite).
MomentEstimate reduce_samples(std::vector<double> values, std::string quantity);

enum class DecouplingForm { norm, power };

struct DecouplingCheck {
  MomentEstimate lhs;       // E ||F(x)||
  MomentEstimate rhs;       // E ||F(x^(1), ..., x^(d))||
  double constant = 1.0;    // d^d (norm) or d^{d*2t} (power)
  bool holds = false;       // lhs <= constant * rhs + 4 combined stderr
  double slack = 0.0;       // constant * rhs + 4 se - lhs
};

DecouplingCheck decoupling_ratio(const PolyMatrix& f, const SampleConfig& cfg,
                                 DecouplingForm form = DecouplingForm::norm,
                                 int threads = 0);

struct RosenthalCheck {
  MomentEstimate lhs;  // E ||sum_k C_k x_k||_{4t}^{4t}
  BoundReport rhs;
  bool holds = false;
};

RosenthalCheck rosenthal_empirical(const std::vector<Matrix>& coefficients,
                                   const DistributionSpec& dist, int t,
                                   std::int64_t samples, std::uint64_t seed,
                                   int threads = 0);

/// Compares a Monte Carlo moment against a bound total, honoring the report's
/// normalization (root-form totals are raised to the 4t-th power).
bool dominates(const BoundReport& report, const MomentEstimate& mc,
               double stderr_margin = 4.0);

}  // namespace polymat
