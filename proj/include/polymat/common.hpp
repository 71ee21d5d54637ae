#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace polymat {

/// Bad input: malformed documents, contract violations, non-finite data.
class ValidationError : public std::runtime_error {
 public:
  explicit ValidationError(const std::string& what) : std::runtime_error(what) {}
};

/// A size cap was hit (Gram dimension, exhaustive-search width, term count).
class ResourceError : public std::runtime_error {
 public:
  explicit ResourceError(const std::string& what) : std::runtime_error(what) {}
};

/// Size caps shared across parsing and block materialization.
struct Limits {
  int max_degree = 6;
  int max_vars = 64;
  std::int64_t max_gram_dim = 20000;   // rows + cols of any dense Gram
  std::int64_t max_terms = 200000;
};

/// Worker cap from POLYMAT_THREADS; hardware concurrency otherwise.
int max_threads();

/// Resolve a requested thread count (0 = auto) against the cap.
int effective_threads(int requested);

/// Run fn(i) for i in [0, count) over a static partition. Results must be
/// written to per-index slots; the partition never affects values.
void parallel_for(std::int64_t count, int threads,
                  const std::function<void(std::int64_t)>& fn);

/// Summation over a fixed pairwise tree; independent of thread count.
double pairwise_sum(std::span<const double> values);

struct MeanStderr {
  double mean = 0.0;
  double se = 0.0;
};

/// Sample mean and standard error with pairwise accumulation.
MeanStderr mean_stderr(std::span<const double> values);

double log_sum_exp(std::span<const double> log_values);

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
};

/// Least-squares line through (x_i, y_i).
LineFit fit_line(std::span<const double> xs, std::span<const double> ys);

inline constexpr double kNegInf = -std::numeric_limits<double>::infinity();

}  // namespace polymat
