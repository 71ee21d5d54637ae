#include "polymat/derivative_blocks.hpp"

#include <algorithm>
#include <cmath>

namespace polymat {

DerivativeBlock::DerivativeBlock(const PolyMatrix& f, Mode mode)
    : n_(f.n()), base_rows_(f.rows()), base_cols_(f.cols()), mode_(mode) {
  if (mode == Mode::multilinear_ordered && !f.is_multilinear_content())
    throw ValidationError("derivative blocks: polynomial is not multilinear");
  if (f.is_zero()) return;
  if (f.degree() == 0) {
    Matrix constant = Matrix::Zero(base_rows_, base_cols_);
    for (const auto& [k, coeff] : f.terms()) constant += coeff;
    blocks_.emplace(BlockKey{}, std::move(constant));
  } else {
    blocks_.emplace(BlockKey{}, f);
  }
}

std::int64_t DerivativeBlock::logical_rows() const {
  std::int64_t r = base_rows_;
  for (int i = 0; i < a_ + c_; ++i) r *= n_;
  return r;
}

std::int64_t DerivativeBlock::logical_cols() const {
  std::int64_t r = base_cols_;
  for (int i = 0; i < b_ + c_; ++i) r *= n_;
  return r;
}

bool DerivativeBlock::deterministic() const {
  for (const auto& [key, value] : blocks_)
    if (!std::holds_alternative<Matrix>(value)) return false;
  return true;
}

void DerivativeBlock::apply(Increment inc) {
  std::map<BlockKey, BlockValue> next;
  for (const auto& [key, value] : blocks_) {
    const PolyMatrix* poly = std::get_if<PolyMatrix>(&value);
    if (poly == nullptr) continue;  // constant block: derivative vanishes
    for (int v : poly->support()) {
      PolyMatrix d = mode_ == Mode::multilinear_ordered ? poly->ordered_partial(v)
                                                        : poly->partial_derivative(v);
      if (d.is_zero()) continue;
      BlockKey child = key;
      if (inc == Increment::a || inc == Increment::c) child.row.push_back(v);
      if (inc == Increment::b || inc == Increment::c) child.col.push_back(v);
      BlockValue stored;
      if (d.degree() == 0) {
        Matrix constant = Matrix::Zero(base_rows_, base_cols_);
        for (const auto& [k, coeff] : d.terms()) constant += coeff;
        stored = std::move(constant);
      } else {
        stored = std::move(d);
      }
      next.emplace(std::move(child), std::move(stored));
    }
  }
  blocks_ = std::move(next);
  switch (inc) {
    case Increment::a: ++a_; break;
    case Increment::b: ++b_; break;
    case Increment::c: ++c_; break;
  }
}

DerivativeBlock DerivativeBlock::evaluated(const Vector& x) const {
  DerivativeBlock out = *this;
  for (auto& [key, value] : out.blocks_)
    if (const PolyMatrix* poly = std::get_if<PolyMatrix>(&value))
      value = poly->evaluate(x);
  return out;
}

DerivativeBlock DerivativeBlock::expected(const DistributionSpec& dist) const {
  DerivativeBlock out = *this;
  std::map<BlockKey, BlockValue> kept;
  for (const auto& [key, value] : out.blocks_) {
    Matrix m = std::holds_alternative<Matrix>(value)
                   ? std::get<Matrix>(value)
                   : std::get<PolyMatrix>(value).expectation(dist);
    if (m.cwiseAbs().maxCoeff() == 0.0) continue;
    kept.emplace(key, std::move(m));
  }
  out.blocks_ = std::move(kept);
  return out;
}

namespace {

std::int64_t key_offset(const std::vector<int>& key, int base, int n) {
  // element j (append order) carries weight base * n^j
  std::int64_t offset = 0;
  std::int64_t weight = base;
  for (int v : key) {
    offset += static_cast<std::int64_t>(v - 1) * weight;
    weight *= n;
  }
  return offset;
}

}  // namespace

Matrix DerivativeBlock::materialize_dense(std::int64_t max_entries) const {
  std::int64_t rows = logical_rows(), cols = logical_cols();
  if (rows * cols > max_entries)
    throw ResourceError("dense materialization needs " +
                        std::to_string(rows) + "x" + std::to_string(cols) +
                        " entries, cap is " + std::to_string(max_entries));
  if (!deterministic())
    throw ValidationError("materialize_dense requires deterministic blocks");
  Matrix out = Matrix::Zero(rows, cols);
  for (const auto& [key, value] : blocks_) {
    std::int64_t r0 = key_offset(key.row, base_rows_, n_);
    std::int64_t c0 = key_offset(key.col, base_cols_, n_);
    out.block(r0, c0, base_rows_, base_cols_) = std::get<Matrix>(value);
  }
  return out;
}

DerivativeBlock build_block_ordered(const PolyMatrix& f,
                                    const std::vector<Increment>& order) {
  DerivativeBlock block(f, DerivativeBlock::Mode::multilinear_ordered);
  for (Increment inc : order) block.apply(inc);
  return block;
}

DerivativeBlock build_block(const PolyMatrix& f, int a, int b, int c) {
  if (a < 0 || b < 0 || c < 0)
    throw ValidationError("build_block: counts must be >= 0");
  std::vector<Increment> order;
  order.insert(order.end(), a, Increment::a);
  order.insert(order.end(), b, Increment::b);
  order.insert(order.end(), c, Increment::c);
  return build_block_ordered(f, order);
}

DerivativeBlock build_gaussian_block(const PolyMatrix& p, int a, int b) {
  if (a < 0 || b < 0)
    throw ValidationError("build_gaussian_block: counts must be >= 0");
  DerivativeBlock block(p, DerivativeBlock::Mode::gaussian_literal);
  for (int i = 0; i < a; ++i) block.apply(Increment::a);
  for (int i = 0; i < b; ++i) block.apply(Increment::b);
  return block;
}

double block_schatten_power(const DerivativeBlock& block, int two_t,
                            std::int64_t max_gram_dim) {
  if (!block.deterministic())
    throw ValidationError("block_schatten_power requires deterministic blocks");
  if (block.blocks().empty()) return 0.0;

  // Zero rows/columns do not contribute; compact to the active keys.
  std::map<std::vector<int>, int> row_index, col_index;
  for (const auto& [key, value] : block.blocks()) {
    row_index.emplace(key.row, 0);
    col_index.emplace(key.col, 0);
  }
  int nr = 0, nc = 0;
  for (auto& [k, idx] : row_index) idx = nr++;
  for (auto& [k, idx] : col_index) idx = nc++;

  const std::int64_t rows = static_cast<std::int64_t>(nr) * block.base_rows();
  const std::int64_t cols = static_cast<std::int64_t>(nc) * block.base_cols();
  const bool gram_on_cols = cols <= rows;
  const std::int64_t gram_dim = gram_on_cols ? cols : rows;
  if (gram_dim > max_gram_dim)
    throw ResourceError("block Schatten norm needs a " + std::to_string(gram_dim) +
                        "-dimensional Gram matrix, cap is " +
                        std::to_string(max_gram_dim));

  // Group blocks along the contracted side, then accumulate the Gram.
  Matrix gram = Matrix::Zero(gram_dim, gram_dim);
  if (gram_on_cols) {
    std::map<std::vector<int>, std::vector<std::pair<int, const Matrix*>>> by_row;
    for (const auto& [key, value] : block.blocks())
      by_row[key.row].emplace_back(col_index.at(key.col), &std::get<Matrix>(value));
    const int bc = block.base_cols();
    for (const auto& [rk, entries] : by_row)
      for (const auto& [ci, mi] : entries)
        for (const auto& [cj, mj] : entries)
          gram.block(static_cast<std::int64_t>(ci) * bc,
                     static_cast<std::int64_t>(cj) * bc, bc, bc) +=
              mi->transpose() * (*mj);
  } else {
    std::map<std::vector<int>, std::vector<std::pair<int, const Matrix*>>> by_col;
    for (const auto& [key, value] : block.blocks())
      by_col[key.col].emplace_back(row_index.at(key.row), &std::get<Matrix>(value));
    const int br = block.base_rows();
    for (const auto& [ck, entries] : by_col)
      for (const auto& [ri, mi] : entries)
        for (const auto& [rj, mj] : entries)
          gram.block(static_cast<std::int64_t>(ri) * br,
                     static_cast<std::int64_t>(rj) * br, br, br) +=
              (*mi) * mj->transpose();
  }
  return schatten_power_from_gram(gram, two_t);
}

}  // namespace polymat
