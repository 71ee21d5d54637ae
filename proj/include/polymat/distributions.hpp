#pragma once

#include <cmath>
#include <limits>
#include <string>

#include "polymat/common.hpp"

namespace polymat {

/// Scalar input law. All kinds have mean 0 and variance 1 by construction.
struct DistributionSpec {
  enum class Kind { rademacher, pbiased, gaussian };

  Kind kind = Kind::rademacher;
  double p = 0.5;  // pbiased only

  static DistributionSpec rademacher() { return {Kind::rademacher, 0.5}; }
  static DistributionSpec gaussian() { return {Kind::gaussian, 0.5}; }
  static DistributionSpec pbiased(double p) {
    if (!(p > 0.0 && p < 1.0))
      throw ValidationError("pbiased requires 0 < p < 1");
    return {Kind::pbiased, p};
  }

  bool bounded() const { return kind != Kind::gaussian; }

  /// Value taken with probability p (pbiased), -sqrt((1-p)/p).
  double low_value() const { return -std::sqrt((1.0 - p) / p); }
  /// Value taken with probability 1-p (pbiased), sqrt(p/(1-p)).
  double high_value() const { return std::sqrt(p / (1.0 - p)); }

  /// Subgaussian bound L; infinite for gaussian.
  double bound_L() const {
    switch (kind) {
      case Kind::rademacher:
        return 1.0;
      case Kind::pbiased:
        return std::max(-low_value(), high_value());
      case Kind::gaussian:
        return std::numeric_limits<double>::infinity();
    }
    return 0.0;
  }

  /// Exact E[x^k].
  double moment(int k) const {
    if (k < 0) throw ValidationError("moment order must be >= 0");
    if (k == 0) return 1.0;
    switch (kind) {
      case Kind::rademacher:
        return k % 2 == 0 ? 1.0 : 0.0;
      case Kind::pbiased:
        return p * std::pow(low_value(), k) +
               (1.0 - p) * std::pow(high_value(), k);
      case Kind::gaussian: {
        if (k % 2 != 0) return 0.0;
        double m = 1.0;
        for (int j = 1; j < k; j += 2) m *= j;  // (k-1)!!
        return m;
      }
    }
    return 0.0;
  }

  std::string name() const {
    switch (kind) {
      case Kind::rademacher:
        return "rademacher";
      case Kind::pbiased:
        return "pbiased(" + std::to_string(p) + ")";
      case Kind::gaussian:
        return "gaussian";
    }
    return "?";
  }
};

}  // namespace polymat
