#pragma once

#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "polymat/distributions.hpp"
#include "polymat/linalg.hpp"

namespace polymat {

/// Monomial key: variable indices in [1..n], sorted ascending, repeats encode
/// multiplicity. The stored coefficient is the full monomial coefficient.
using VarSet = std::vector<int>;

/// Matrix-valued polynomial, multiset-keyed.
class PolyMatrix {
 public:
  PolyMatrix(int n, int rows, int cols, bool multilinear);

  static PolyMatrix zero(int n, int rows, int cols, bool multilinear = true) {
    return PolyMatrix(n, rows, cols, multilinear);
  }

  /// Accumulates coeff onto the (canonicalized) key.
  void add_term(VarSet vars, const Matrix& coeff);

  int n() const { return n_; }
  int rows() const { return rows_; }
  int cols() const { return cols_; }
  bool multilinear_flag() const { return multilinear_; }
  const std::map<VarSet, Matrix>& terms() const { return terms_; }

  bool is_zero() const;
  int degree() const;      // max key size; 0 for the zero polynomial
  int min_degree() const;
  bool is_homogeneous() const;
  /// True when every key has distinct indices (regardless of the flag).
  bool is_multilinear_content() const;

  /// Variables appearing in at least one term with a nonzero coefficient.
  std::vector<int> support() const;

  Matrix evaluate(const Vector& x) const;

  /// Decoupled evaluation of a homogeneous multilinear polynomial of degree d:
  /// each monomial's coefficient splits as C_S/d! over the d! orderings of S,
  /// and ordering slot j reads copy j. Identical copies reproduce evaluate().
  Matrix evaluate_decoupled(const std::vector<Vector>& copies) const;

  /// Formal partial derivative: multiplicity decremented, coefficient scaled
  /// by the original multiplicity.
  PolyMatrix partial_derivative(int var) const;

  /// Ordered-occurrence derivative: each term scaled by mult(var)/|S| instead
  /// of mult(var). Iterating to full depth leaves coefficients C_S/d!.
  PolyMatrix ordered_partial(int var) const;

  PolyMatrix homogeneous_part(int d) const;

  Matrix expectation(const DistributionSpec& dist) const;

  PolyMatrix transpose() const;

  PolyMatrix scaled(double factor) const;

 private:
  int n_;
  int rows_, cols_;
  bool multilinear_;
  std::map<VarSet, Matrix> terms_;
};

PolyMatrix parse_polymatrix(const nlohmann::json& doc, const Limits& limits = {});
PolyMatrix parse_polymatrix(const std::string& text, const Limits& limits = {});
PolyMatrix load_polymatrix(const std::string& path, const Limits& limits = {});
nlohmann::json serialize(const PolyMatrix& f);

}  // namespace polymat
