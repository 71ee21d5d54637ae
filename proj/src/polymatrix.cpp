#include "polymat/polymatrix.hpp"

#include <algorithm>
#include <fstream>
#include <numeric>
#include <set>
#include <sstream>

namespace polymat {

using nlohmann::json;

PolyMatrix::PolyMatrix(int n, int rows, int cols, bool multilinear)
    : n_(n), rows_(rows), cols_(cols), multilinear_(multilinear) {
  if (n < 0) throw ValidationError("variable count must be >= 0");
  if (rows < 1 || cols < 1) throw ValidationError("dims must be >= 1");
}

void PolyMatrix::add_term(VarSet vars, const Matrix& coeff) {
  std::sort(vars.begin(), vars.end());
  for (int v : vars)
    if (v < 1 || v > n_)
      throw ValidationError("variable index " + std::to_string(v) +
                            " out of range [1.." + std::to_string(n_) + "]");
  if (multilinear_ && std::adjacent_find(vars.begin(), vars.end()) != vars.end())
    throw ValidationError("repeated variable index under multilinear flag");
  if (coeff.rows() != rows_ || coeff.cols() != cols_)
    throw ValidationError("coefficient dimension mismatch");
  require_finite(coeff, "coefficient");
  auto [it, inserted] = terms_.emplace(std::move(vars), coeff);
  if (!inserted) it->second += coeff;
}

bool PolyMatrix::is_zero() const {
  for (const auto& [k, c] : terms_)
    if (c.cwiseAbs().maxCoeff() != 0.0) return false;
  return true;
}

int PolyMatrix::degree() const {
  int d = 0;
  for (const auto& [k, c] : terms_)
    if (c.cwiseAbs().maxCoeff() != 0.0) d = std::max<int>(d, k.size());
  return d;
}

int PolyMatrix::min_degree() const {
  int d = -1;
  for (const auto& [k, c] : terms_) {
    if (c.cwiseAbs().maxCoeff() == 0.0) continue;
    int sz = static_cast<int>(k.size());
    d = d < 0 ? sz : std::min(d, sz);
  }
  return d < 0 ? 0 : d;
}

bool PolyMatrix::is_homogeneous() const {
  return degree() == min_degree();
}

bool PolyMatrix::is_multilinear_content() const {
  for (const auto& [k, c] : terms_) {
    if (c.cwiseAbs().maxCoeff() == 0.0) continue;
    if (std::adjacent_find(k.begin(), k.end()) != k.end()) return false;
  }
  return true;
}

std::vector<int> PolyMatrix::support() const {
  std::set<int> vars;
  for (const auto& [k, c] : terms_) {
    if (c.cwiseAbs().maxCoeff() == 0.0) continue;
    vars.insert(k.begin(), k.end());
  }
  return {vars.begin(), vars.end()};
}

Matrix PolyMatrix::evaluate(const Vector& x) const {
  if (x.size() != n_)
    throw ValidationError("evaluate: vector length " + std::to_string(x.size()) +
                          " != n = " + std::to_string(n_));
  Matrix out = Matrix::Zero(rows_, cols_);
  for (const auto& [key, coeff] : terms_) {
    double mono = 1.0;
    for (int v : key) mono *= x[v - 1];
    if (mono != 0.0) out += mono * coeff;
  }
  return out;
}

Matrix PolyMatrix::evaluate_decoupled(const std::vector<Vector>& copies) const {
  if (!is_multilinear_content())
    throw ValidationError("evaluate_decoupled requires a multilinear polynomial");
  if (!is_homogeneous())
    throw ValidationError("evaluate_decoupled requires a homogeneous polynomial");
  const int d = degree();
  if (static_cast<int>(copies.size()) != d)
    throw ValidationError("evaluate_decoupled: expected " + std::to_string(d) +
                          " copies, got " + std::to_string(copies.size()));
  for (const auto& x : copies)
    if (x.size() != n_) throw ValidationError("evaluate_decoupled: copy length != n");

  Matrix out = Matrix::Zero(rows_, cols_);
  if (d == 0) {
    for (const auto& [key, coeff] : terms_) out += coeff;
    return out;
  }
  double dfact = 1.0;
  for (int j = 2; j <= d; ++j) dfact *= j;
  for (const auto& [key, coeff] : terms_) {
    if (static_cast<int>(key.size()) != d) continue;
    VarSet perm = key;  // sorted; distinct by multilinearity
    double sum = 0.0;
    do {
      double mono = 1.0;
      for (int j = 0; j < d; ++j) mono *= copies[j][perm[j] - 1];
      sum += mono;
    } while (std::next_permutation(perm.begin(), perm.end()));
    if (sum != 0.0) out += (sum / dfact) * coeff;
  }
  return out;
}

namespace {

PolyMatrix derive(const PolyMatrix& f, int var, bool ordered) {
  if (var < 1 || var > f.n())
    throw ValidationError("derivative variable out of range");
  PolyMatrix out(f.n(), f.rows(), f.cols(), f.multilinear_flag());
  for (const auto& [key, coeff] : f.terms()) {
    auto lo = std::lower_bound(key.begin(), key.end(), var);
    if (lo == key.end() || *lo != var) continue;
    int mult = static_cast<int>(std::count(key.begin(), key.end(), var));
    VarSet reduced;
    reduced.reserve(key.size() - 1);
    bool removed = false;
    for (int v : key) {
      if (v == var && !removed) {
        removed = true;
        continue;
      }
      reduced.push_back(v);
    }
    double scale = ordered ? static_cast<double>(mult) / key.size()
                           : static_cast<double>(mult);
    out.add_term(std::move(reduced), scale * coeff);
  }
  return out;
}

}  // namespace

PolyMatrix PolyMatrix::partial_derivative(int var) const {
  return derive(*this, var, /*ordered=*/false);
}

PolyMatrix PolyMatrix::ordered_partial(int var) const {
  return derive(*this, var, /*ordered=*/true);
}

PolyMatrix PolyMatrix::homogeneous_part(int d) const {
  if (d < 0) throw ValidationError("homogeneous_part: degree must be >= 0");
  PolyMatrix out(n_, rows_, cols_, multilinear_);
  for (const auto& [key, coeff] : terms_)
    if (static_cast<int>(key.size()) == d) out.add_term(key, coeff);
  return out;
}

Matrix PolyMatrix::expectation(const DistributionSpec& dist) const {
  Matrix out = Matrix::Zero(rows_, cols_);
  for (const auto& [key, coeff] : terms_) {
    double w = 1.0;
    for (std::size_t i = 0; i < key.size();) {
      std::size_t j = i;
      while (j < key.size() && key[j] == key[i]) ++j;
      w *= dist.moment(static_cast<int>(j - i));
      i = j;
    }
    if (w != 0.0) out += w * coeff;
  }
  return out;
}

PolyMatrix PolyMatrix::transpose() const {
  PolyMatrix out(n_, cols_, rows_, multilinear_);
  for (const auto& [key, coeff] : terms_) out.add_term(key, coeff.transpose());
  return out;
}

PolyMatrix PolyMatrix::scaled(double factor) const {
  PolyMatrix out(n_, rows_, cols_, multilinear_);
  for (const auto& [key, coeff] : terms_) out.add_term(key, factor * coeff);
  return out;
}

namespace {

[[noreturn]] void schema_error(const std::string& msg, int term_index = -1) {
  std::string where =
      term_index >= 0 ? " (term " + std::to_string(term_index) + ")" : "";
  throw ValidationError("polymatrix schema: " + msg + where);
}

}  // namespace

PolyMatrix parse_polymatrix(const json& doc, const Limits& limits) {
  if (!doc.is_object()) schema_error("document must be a JSON object");
  for (const char* field : {"n", "dims", "multilinear", "terms"})
    if (!doc.contains(field)) schema_error(std::string("missing field '") + field + "'");
  if (!doc["n"].is_number_integer()) schema_error("'n' must be an integer");
  int n = doc["n"].get<int>();
  if (n < 0) schema_error("'n' must be >= 0");
  if (n > limits.max_vars)
    schema_error("'n' exceeds variable cap " + std::to_string(limits.max_vars));
  if (!doc["dims"].is_array() || doc["dims"].size() != 2)
    schema_error("'dims' must be [d1, d2]");
  int d1 = doc["dims"][0].get<int>(), d2 = doc["dims"][1].get<int>();
  if (d1 < 1 || d2 < 1) schema_error("dims must be >= 1");
  if (!doc["multilinear"].is_boolean()) schema_error("'multilinear' must be a bool");
  bool multilinear = doc["multilinear"].get<bool>();

  PolyMatrix out(n, d1, d2, multilinear);
  if (!doc["terms"].is_array()) schema_error("'terms' must be an array");
  std::set<VarSet> seen;
  int idx = 0;
  for (const auto& term : doc["terms"]) {
    if (!term.is_object() || !term.contains("vars") || !term.contains("matrix"))
      schema_error("term must have 'vars' and 'matrix'", idx);
    VarSet vars;
    for (const auto& v : term["vars"]) {
      if (!v.is_number_integer()) schema_error("'vars' entries must be integers", idx);
      vars.push_back(v.get<int>());
    }
    std::sort(vars.begin(), vars.end());
    for (int v : vars)
      if (v < 1 || v > n) schema_error("variable index out of range", idx);
    if (static_cast<int>(vars.size()) > limits.max_degree)
      schema_error("degree exceeds cap " + std::to_string(limits.max_degree), idx);
    if (multilinear &&
        std::adjacent_find(vars.begin(), vars.end()) != vars.end())
      schema_error("repeated index under multilinear flag", idx);
    if (!seen.insert(vars).second) schema_error("duplicate 'vars' key", idx);

    const auto& rows = term["matrix"];
    if (!rows.is_array() || static_cast<int>(rows.size()) != d1)
      schema_error("matrix row count != d1", idx);
    Matrix coeff(d1, d2);
    for (int r = 0; r < d1; ++r) {
      if (!rows[r].is_array() || static_cast<int>(rows[r].size()) != d2)
        schema_error("matrix column count != d2", idx);
      for (int c = 0; c < d2; ++c) {
        if (!rows[r][c].is_number()) schema_error("matrix entries must be numbers", idx);
        coeff(r, c) = rows[r][c].get<double>();
      }
    }
    if (!coeff.allFinite()) schema_error("matrix entries must be finite", idx);
    if (static_cast<std::int64_t>(seen.size()) > limits.max_terms)
      throw ResourceError("polymatrix term cap exceeded");
    out.add_term(std::move(vars), coeff);
    ++idx;
  }
  return out;
}

PolyMatrix parse_polymatrix(const std::string& text, const Limits& limits) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw ValidationError(std::string("polymatrix schema: invalid JSON: ") + e.what());
  }
  return parse_polymatrix(doc, limits);
}

PolyMatrix load_polymatrix(const std::string& path, const Limits& limits) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open polymatrix file: " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_polymatrix(buf.str(), limits);
}

json serialize(const PolyMatrix& f) {
  json doc;
  doc["n"] = f.n();
  doc["dims"] = {f.rows(), f.cols()};
  doc["multilinear"] = f.multilinear_flag();
  json terms = json::array();
  for (const auto& [key, coeff] : f.terms()) {
    json term;
    term["vars"] = key;
    json rows = json::array();
    for (Eigen::Index r = 0; r < coeff.rows(); ++r) {
      json row = json::array();
      for (Eigen::Index c = 0; c < coeff.cols(); ++c) row.push_back(coeff(r, c));
      rows.push_back(std::move(row));
    }
    term["matrix"] = std::move(rows);
    terms.push_back(std::move(term));
  }
  doc["terms"] = std::move(terms);
  return doc;
}

}  // namespace polymat
