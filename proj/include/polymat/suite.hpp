#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "polymat/graph_matrices.hpp"
#include "polymat/melon.hpp"

namespace polymat::suite {

inline constexpr std::uint64_t kDefaultSeed = 1234567;

struct CriterionResult {
  int id = 0;
  std::string name;
  bool pass = false;
  std::string detail;
  double seconds = 0.0;
};

struct SuiteResult {
  std::vector<CriterionResult> criteria;
  /// Canonical numeric report (no timings); byte-identical across reruns and
  /// worker counts for a fixed seed.
  std::string report_json;
  bool all_pass() const;
};

struct SuiteOptions {
  std::uint64_t seed = kDefaultSeed;
  int threads = 0;  // 0 = auto
};

/// Criteria 1..11 in one pass.
SuiteResult run_criteria(const SuiteOptions& opts);

/// Criteria 1..11 plus the determinism criterion 12 (reruns the corpus with a
/// different worker count and compares canonical report bytes).
SuiteResult run_full(const SuiteOptions& opts);

std::string format_table(const SuiteResult& result);

// Seeded corpus pieces reused by unit tests and the CLI.

/// The 2x2 order-2 chaos instance over three Rademacher variables.
PolyMatrix chaos2();

/// Seeded random homogeneous multilinear instance.
PolyMatrix random_multilinear(int n, int d, int rows, int cols,
                              std::uint64_t seed, bool homogeneous = true);

/// Seeded random homogeneous Gaussian instance (repeated indices allowed).
PolyMatrix random_gaussian_poly(int n, int d, int rows, int cols,
                                std::uint64_t seed);

Matrix random_matrix(int rows, int cols, std::uint64_t seed,
                     std::uint64_t stream = 0);

Shape edge_shape();
Shape path2_shape();
Shape triangle_shape();

}  // namespace polymat::suite
