#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "polymat/derivative_blocks.hpp"

namespace polymat {

enum class TheoremId {
  rosenthal,
  quadratic,
  homogeneous_multilinear,
  multilinear,
  gaussian,
  graph_shape,
  melon,
};

enum class Normalization { moment_power, moment_root };

std::string theorem_name(TheoremId id);
std::string normalization_name(Normalization n);

struct BoundTerm {
  std::string label;
  double log_constant = 0.0;
  double schatten = 0.0;        // the Schatten factor, linear scale
  double log_contribution = kNegInf;
};

/// Assembled right-hand side of one theorem. Terms combine additively except
/// for graph_shape, whose factor groups multiply (product_form).
struct BoundReport {
  TheoremId theorem;
  int t = 2;
  Normalization normalization = Normalization::moment_power;
  bool product_form = false;
  std::vector<BoundTerm> terms;
  double log_total = kNegInf;
  nlohmann::json notes;  // optional diagnostics (separator, exact values, ...)

  double total() const;  // exp(log_total); +inf past double range
  void finalize();       // recompute log_total from the terms

  nlohmann::json to_json() const;
  std::string to_csv() const;
};

struct BoundOptions {
  std::int64_t max_gram_dim = Limits{}.max_gram_dim;
  /// Rosenthal diagonal term: bound E|x|^{4t} by L^{4t} instead of using the
  /// exact moment.
  bool use_L_power = false;
};

/// Linear series sum_k C_k x_k: (16t)^{3t} Gram terms plus (8t)^{4t} diagonal.
BoundReport rosenthal_rhs(const std::vector<Matrix>& coefficients,
                          const DistributionSpec& dist, int t,
                          const BoundOptions& opts = {});

/// Degree-2 recursion, moment_root form: 2(32t)^2 sum L^c ||F_{a,b,c}||_{4t}.
BoundReport quadratic_bound(const PolyMatrix& f, const DistributionSpec& dist,
                            int t, const BoundOptions& opts = {});

/// Degree-d recursion, moment_power form:
/// sum_{a+b+c=d} (48dt)^{4dt} L^{4ct} ||F_{a,b,c}||_{4t}^{4t}.
BoundReport homogeneous_multilinear_bound(const PolyMatrix& f,
                                          const DistributionSpec& dist, int t,
                                          const BoundOptions& opts = {});

/// Mixed-degree multilinear form: per-degree parts weighted by D^{4t}.
BoundReport multilinear_bound(const PolyMatrix& f, const DistributionSpec& dist,
                              int t, const BoundOptions& opts = {});

/// Gaussian recursion: (2^d sqrt(2) t)^{2t} sum_{1<=a+b<=d} ||E P_{a,b}||_{2t}^{2t}.
BoundReport gaussian_bound(const PolyMatrix& p, int t,
                           const BoundOptions& opts = {});

struct TraceInequalityResult {
  double lhs = 0.0;
  double rhs = 0.0;
  bool holds = false;
};

/// tr|sum A_i|^r <= m^{r-1} tr(sum |A_i|^r), via singular values.
TraceInequalityResult trace_inequality_check(const std::vector<Matrix>& matrices,
                                             double r);

/// Markov: min(1, moment_bound / threshold^power).
double tail_from_moment(double moment_bound, int power, double threshold);
double tail_from_moment_log(double log_moment_bound, int power, double threshold);

}  // namespace polymat
