#include "polymat/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace polymat {

using nlohmann::json;

std::string theorem_name(TheoremId id) {
  switch (id) {
    case TheoremId::rosenthal: return "rosenthal";
    case TheoremId::quadratic: return "quadratic";
    case TheoremId::homogeneous_multilinear: return "homogeneous_multilinear";
    case TheoremId::multilinear: return "multilinear";
    case TheoremId::gaussian: return "gaussian";
    case TheoremId::graph_shape: return "graph_shape";
    case TheoremId::melon: return "melon";
  }
  return "?";
}

std::string normalization_name(Normalization n) {
  return n == Normalization::moment_power ? "moment_power" : "moment_root";
}

double BoundReport::total() const { return std::exp(log_total); }

void BoundReport::finalize() {
  if (product_form) {
    double sum = 0.0;
    for (const auto& term : terms) sum += term.log_contribution;
    log_total = terms.empty() ? kNegInf : sum;
    return;
  }
  std::vector<double> logs;
  logs.reserve(terms.size());
  for (const auto& term : terms) logs.push_back(term.log_contribution);
  log_total = log_sum_exp(logs);
}

json BoundReport::to_json() const {
  json doc;
  doc["theorem"] = theorem_name(theorem);
  doc["t"] = t;
  doc["normalization"] = normalization_name(normalization);
  if (product_form) doc["combine"] = "product";
  json jterms = json::array();
  for (const auto& term : terms) {
    json jt;
    jt["label"] = term.label;
    jt["log_constant"] = term.log_constant;
    jt["schatten"] = term.schatten;
    jt["log_contribution"] = term.log_contribution;
    jterms.push_back(std::move(jt));
  }
  doc["terms"] = std::move(jterms);
  doc["log_total"] = log_total;
  if (std::isfinite(log_total)) {
    if (log_total < 690.0) {
      doc["total"] = total();
    } else {
      // past double range: report as mantissa * 10^exponent
      double exp10 = std::floor(log_total / std::log(10.0));
      doc["total_mantissa"] = std::exp(log_total - exp10 * std::log(10.0));
      doc["total_exp10"] = exp10;
    }
  }
  if (!notes.is_null()) doc["notes"] = notes;
  return doc;
}

std::string BoundReport::to_csv() const {
  std::ostringstream out;
  out << "label,log_constant,schatten,log_contribution\n";
  for (const auto& term : terms)
    out << '"' << term.label << "\"," << term.log_constant << ','
        << term.schatten << ',' << term.log_contribution << '\n';
  out << "\"total\",,," << log_total << '\n';
  return out.str();
}

namespace {

int require_t(int t) {
  if (t < 2) throw ValidationError("t must be an integer >= 2");
  return t;
}

double require_bounded_L(const DistributionSpec& dist, TheoremId id) {
  if (!dist.bounded()) {
    std::string hint = id == TheoremId::quadratic
                           ? "; use gaussian_bound for gaussian inputs"
                           : "";
    throw ValidationError(theorem_name(id) + " requires a bounded distribution" + hint);
  }
  return dist.bound_L();
}

BoundTerm make_term(std::string label, double log_constant, double schatten) {
  BoundTerm term;
  term.label = std::move(label);
  term.log_constant = log_constant;
  term.schatten = schatten;
  term.log_contribution =
      schatten > 0.0 ? log_constant + std::log(schatten) : kNegInf;
  return term;
}

std::string abc_label(int a, int b, int c) {
  std::ostringstream out;
  out << '(' << a << ',' << b << ',' << c << ')';
  return out.str();
}

}  // namespace

BoundReport rosenthal_rhs(const std::vector<Matrix>& coefficients,
                          const DistributionSpec& dist, int t,
                          const BoundOptions& opts) {
  require_t(t);
  BoundReport report;
  report.theorem = TheoremId::rosenthal;
  report.t = t;
  report.normalization = Normalization::moment_power;
  if (coefficients.empty()) {
    report.finalize();
    return report;
  }
  const Eigen::Index r = coefficients.front().rows();
  const Eigen::Index c = coefficients.front().cols();
  Matrix row_gram = Matrix::Zero(r, r);
  Matrix col_gram = Matrix::Zero(c, c);
  double diag_sum = 0.0;
  for (const auto& ck : coefficients) {
    if (ck.rows() != r || ck.cols() != c)
      throw ValidationError("rosenthal_rhs: coefficient dimension mismatch");
    require_finite(ck, "rosenthal coefficient");
    row_gram += ck * ck.transpose();  // E x^2 = 1
    col_gram += ck.transpose() * ck;
    diag_sum += schatten_power(ck, 4 * t);
  }
  const double log_gram_const = 3.0 * t * std::log(16.0 * t);
  double diag_moment;
  if (opts.use_L_power) {
    double L = require_bounded_L(dist, TheoremId::rosenthal);
    diag_moment = 4.0 * t * std::log(L);
  } else {
    diag_moment = std::log(dist.moment(4 * t));
  }
  const double log_diag_const = 4.0 * t * std::log(8.0 * t) + diag_moment;

  report.terms.push_back(make_term(
      "row_gram", log_gram_const, psd_sqrt_schatten_power(row_gram, 4 * t)));
  report.terms.push_back(make_term(
      "col_gram", log_gram_const, psd_sqrt_schatten_power(col_gram, 4 * t)));
  report.terms.push_back(make_term("diagonal", log_diag_const, diag_sum));
  report.finalize();
  return report;
}

BoundReport quadratic_bound(const PolyMatrix& f, const DistributionSpec& dist,
                            int t, const BoundOptions& opts) {
  require_t(t);
  double L = require_bounded_L(dist, TheoremId::quadratic);
  BoundReport report;
  report.theorem = TheoremId::quadratic;
  report.t = t;
  report.normalization = Normalization::moment_root;
  if (f.is_zero()) {
    report.finalize();
    return report;
  }
  if (!f.is_multilinear_content() || !f.is_homogeneous() || f.degree() != 2)
    throw ValidationError("quadratic_bound requires a homogeneous multilinear degree-2 polynomial");
  const double log_c = std::log(2.0) + 2.0 * std::log(32.0 * t);
  for (int a = 0; a <= 2; ++a)
    for (int b = 0; a + b <= 2; ++b) {
      int c = 2 - a - b;
      DerivativeBlock block = build_block(f, a, b, c);
      double power = block_schatten_power(block, 4 * t, opts.max_gram_dim);
      double norm = power > 0.0 ? std::pow(power, 1.0 / (4.0 * t)) : 0.0;
      report.terms.push_back(
          make_term(abc_label(a, b, c), log_c + c * std::log(L), norm));
    }
  report.finalize();
  return report;
}

BoundReport homogeneous_multilinear_bound(const PolyMatrix& f,
                                          const DistributionSpec& dist, int t,
                                          const BoundOptions& opts) {
  require_t(t);
  double L = require_bounded_L(dist, TheoremId::homogeneous_multilinear);
  BoundReport report;
  report.theorem = TheoremId::homogeneous_multilinear;
  report.t = t;
  report.normalization = Normalization::moment_power;
  if (f.is_zero()) {
    report.finalize();
    return report;
  }
  if (!f.is_multilinear_content() || !f.is_homogeneous() || f.degree() < 1)
    throw ValidationError(
        "homogeneous_multilinear_bound requires a homogeneous multilinear polynomial of degree >= 1");
  const int d = f.degree();
  const double log_c = 4.0 * d * t * std::log(48.0 * d * t);
  for (int a = 0; a <= d; ++a)
    for (int b = 0; a + b <= d; ++b) {
      int c = d - a - b;
      DerivativeBlock block = build_block(f, a, b, c);
      double power = block_schatten_power(block, 4 * t, opts.max_gram_dim);
      report.terms.push_back(
          make_term(abc_label(a, b, c), log_c + 4.0 * c * t * std::log(L), power));
    }
  report.finalize();
  return report;
}

BoundReport multilinear_bound(const PolyMatrix& f, const DistributionSpec& dist,
                              int t, const BoundOptions& opts) {
  require_t(t);
  require_bounded_L(dist, TheoremId::multilinear);
  BoundReport report;
  report.theorem = TheoremId::multilinear;
  report.t = t;
  report.normalization = Normalization::moment_power;
  if (f.is_zero()) {
    report.finalize();
    return report;
  }
  if (!f.is_multilinear_content())
    throw ValidationError("multilinear_bound requires a multilinear polynomial");
  const int cap_degree = f.degree();
  if (cap_degree < 1) {
    report.finalize();  // constant polynomial: F = EF
    return report;
  }
  const double log_degree_factor = 4.0 * t * std::log(static_cast<double>(cap_degree));
  for (int d = 1; d <= cap_degree; ++d) {
    PolyMatrix part = f.homogeneous_part(d);
    if (part.is_zero()) continue;
    BoundReport sub = homogeneous_multilinear_bound(part, dist, t, opts);
    for (const auto& term : sub.terms) {
      BoundTerm scaled = term;
      scaled.label = "d=" + std::to_string(d) + ":" + term.label;
      scaled.log_constant += log_degree_factor;
      scaled.log_contribution = scaled.schatten > 0.0
                                    ? scaled.log_constant + std::log(scaled.schatten)
                                    : kNegInf;
      report.terms.push_back(std::move(scaled));
    }
  }
  report.finalize();
  return report;
}

BoundReport gaussian_bound(const PolyMatrix& p, int t, const BoundOptions& opts) {
  require_t(t);
  BoundReport report;
  report.theorem = TheoremId::gaussian;
  report.t = t;
  report.normalization = Normalization::moment_power;
  if (p.is_zero()) {
    report.finalize();
    return report;
  }
  if (!p.is_homogeneous() || p.degree() < 1)
    throw ValidationError("gaussian_bound requires a homogeneous polynomial of degree >= 1");
  const int d = p.degree();
  const double log_c =
      2.0 * t * (d * std::log(2.0) + 0.5 * std::log(2.0) + std::log(static_cast<double>(t)));
  const DistributionSpec gauss = DistributionSpec::gaussian();
  for (int a = 0; a <= d; ++a)
    for (int b = 0; a + b <= d; ++b) {
      if (a + b < 1) continue;
      DerivativeBlock block = build_gaussian_block(p, a, b).expected(gauss);
      double power = block_schatten_power(block, 2 * t, opts.max_gram_dim);
      std::ostringstream label;
      label << '(' << a << ',' << b << ')';
      report.terms.push_back(make_term(label.str(), log_c, power));
    }
  report.finalize();
  return report;
}

TraceInequalityResult trace_inequality_check(const std::vector<Matrix>& matrices,
                                             double r) {
  if (r < 1.0) throw ValidationError("trace inequality requires r >= 1");
  if (matrices.empty())
    throw ValidationError("trace inequality requires at least one matrix");
  const Eigen::Index dim = matrices.front().rows();
  for (const auto& m : matrices)
    if (m.rows() != m.cols() || m.rows() != dim)
      throw ValidationError("trace inequality requires square matrices of equal size");
  Matrix sum = Matrix::Zero(dim, dim);
  double rhs_terms = 0.0;
  for (const auto& m : matrices) {
    sum += m;
    rhs_terms += singular_power_sum(m, r);
  }
  TraceInequalityResult out;
  out.lhs = singular_power_sum(sum, r);
  out.rhs = std::pow(static_cast<double>(matrices.size()), r - 1.0) * rhs_terms;
  out.holds = out.lhs <= out.rhs * (1.0 + 1e-9);
  return out;
}

double tail_from_moment(double moment_bound, int power, double threshold) {
  if (moment_bound < 0.0) throw ValidationError("moment bound must be >= 0");
  if (moment_bound == 0.0) {
    if (threshold <= 0.0) throw ValidationError("threshold must be > 0");
    return 0.0;
  }
  return tail_from_moment_log(std::log(moment_bound), power, threshold);
}

double tail_from_moment_log(double log_moment_bound, int power, double threshold) {
  if (threshold <= 0.0) throw ValidationError("threshold must be > 0");
  if (power < 1) throw ValidationError("power must be >= 1");
  double log_p = log_moment_bound - power * std::log(threshold);
  return std::exp(std::min(0.0, log_p));
}

}  // namespace polymat
