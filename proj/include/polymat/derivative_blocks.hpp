#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <variant>
#include <vector>

#include "polymat/polymatrix.hpp"

namespace polymat {

enum class Increment : char { a = 'a', b = 'b', c = 'c' };

/// Variable tuples addressing a block row/column. Elements are appended in
/// increment-application order; the newest element is the outermost (most
/// significant) stacking position. c-increments append to both sides, so the
/// trailing c indices of row and col keys coincide.
struct BlockKey {
  std::vector<int> row;
  std::vector<int> col;
  auto operator<=>(const BlockKey&) const = default;
};

/// Sparse block matrix of iterated partial derivatives. Blocks hold a
/// PolyMatrix until fully differentiated, a plain Matrix afterwards.
class DerivativeBlock {
 public:
  enum class Mode {
    multilinear_ordered,  // ordered-occurrence derivative; full depth leaves C_S/d!
    gaussian_literal,     // literal iterated derivative
  };

  using BlockValue = std::variant<Matrix, PolyMatrix>;

  DerivativeBlock(const PolyMatrix& f, Mode mode);

  void apply(Increment inc);

  int n() const { return n_; }
  int base_rows() const { return base_rows_; }
  int base_cols() const { return base_cols_; }
  int a() const { return a_; }
  int b() const { return b_; }
  int c() const { return c_; }
  Mode mode() const { return mode_; }

  std::int64_t logical_rows() const;
  std::int64_t logical_cols() const;

  const std::map<BlockKey, BlockValue>& blocks() const { return blocks_; }
  bool deterministic() const;

  /// Replace every polynomial block by its value at x.
  DerivativeBlock evaluated(const Vector& x) const;

  /// Replace every polynomial block by its expectation; exact-zero blocks are
  /// dropped.
  DerivativeBlock expected(const DistributionSpec& dist) const;

  /// Dense materialization at the full logical dimensions.
  Matrix materialize_dense(std::int64_t max_entries = 25'000'000) const;

 private:
  int n_;
  int base_rows_, base_cols_;
  int a_ = 0, b_ = 0, c_ = 0;
  Mode mode_;
  std::map<BlockKey, BlockValue> blocks_;
};

/// F_{a,b,c} for multilinear F, canonical order: a-increments, then b, then c.
DerivativeBlock build_block(const PolyMatrix& f, int a, int b, int c);

/// F_{a,b,c} along an explicit increment sequence.
DerivativeBlock build_block_ordered(const PolyMatrix& f,
                                    const std::vector<Increment>& order);

/// P_{a,b} with literal derivatives (repeats allowed), a-increments first.
DerivativeBlock build_gaussian_block(const PolyMatrix& p, int a, int b);

/// ||B||_{2t}^{2t} from the sparse block structure. Requires a deterministic
/// block matrix; the dense Gram is restricted to active keys and its dimension
/// must not exceed max_gram_dim.
double block_schatten_power(const DerivativeBlock& block, int two_t,
                            std::int64_t max_gram_dim = Limits{}.max_gram_dim);

}  // namespace polymat
