#include "polymat/graph_matrices.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace polymat {

using nlohmann::json;

std::vector<std::string> Shape::validate() const {
  if (k < 1) throw ValidationError("shape: k must be >= 1");
  if (k > 16) throw ResourceError("shape: k > 16 is outside exhaustive-search range");
  std::set<std::pair<int, int>> seen;
  for (auto [u, v] : edges) {
    if (u < 1 || u > k || v < 1 || v > k)
      throw ValidationError("shape: edge endpoint out of range");
    if (u == v) throw ValidationError("shape: self-loops are not allowed");
    auto key = std::minmax(u, v);
    if (!seen.insert(key).second)
      throw ValidationError("shape: duplicate edge");
  }
  for (const auto* side : {&U, &V}) {
    std::set<int> verts;
    for (int v : *side) {
      if (v < 1 || v > k) throw ValidationError("shape: boundary vertex out of range");
      if (!verts.insert(v).second)
        throw ValidationError("shape: repeated vertex in a boundary tuple");
    }
  }
  std::vector<std::string> warnings;
  std::vector<bool> touched(k + 1, false);
  for (auto [u, v] : edges) touched[u] = touched[v] = true;
  for (int v : U) touched[v] = true;
  for (int v : V) touched[v] = true;
  for (int v = 1; v <= k; ++v)
    if (!touched[v])
      warnings.push_back("vertex " + std::to_string(v) +
                         " is isolated and outside U and V");
  return warnings;
}

Shape parse_shape(const json& doc) {
  if (!doc.is_object()) throw ValidationError("shape schema: document must be an object");
  for (const char* field : {"k", "edges", "U", "V"})
    if (!doc.contains(field))
      throw ValidationError(std::string("shape schema: missing field '") + field + "'");
  Shape shape;
  shape.k = doc["k"].get<int>();
  for (const auto& e : doc["edges"]) {
    if (!e.is_array() || e.size() != 2)
      throw ValidationError("shape schema: edges must be pairs");
    int u = e[0].get<int>(), v = e[1].get<int>();
    shape.edges.emplace_back(std::min(u, v), std::max(u, v));
  }
  for (const auto& v : doc["U"]) shape.U.push_back(v.get<int>());
  for (const auto& v : doc["V"]) shape.V.push_back(v.get<int>());
  shape.validate();
  return shape;
}

Shape parse_shape(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw ValidationError(std::string("shape schema: invalid JSON: ") + e.what());
  }
  return parse_shape(doc);
}

Shape load_shape(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open shape file: " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_shape(buf.str());
}

json serialize(const Shape& shape) {
  json doc;
  doc["k"] = shape.k;
  json edges = json::array();
  for (auto [u, v] : shape.edges) edges.push_back({u, v});
  doc["edges"] = std::move(edges);
  doc["U"] = shape.U;
  doc["V"] = shape.V;
  return doc;
}

int num_edge_vars(int n) { return n * (n - 1) / 2; }

int edge_var_index(int i, int j, int n) {
  if (i == j) throw ValidationError("edge_var_index: i == j");
  if (i > j) std::swap(i, j);
  if (i < 1 || j > n) throw ValidationError("edge_var_index: endpoint out of range");
  return (i - 1) * n - i * (i - 1) / 2 + (j - i - 1);
}

std::int64_t injective_tuple_count(int n, int m) {
  std::int64_t c = 1;
  for (int i = 0; i < m; ++i) c *= (n - i);
  return c;
}

std::int64_t injective_tuple_rank(const std::vector<int>& tuple, int n) {
  const int m = static_cast<int>(tuple.size());
  std::int64_t rank = 0;
  for (int pos = 0; pos < m; ++pos) {
    int smaller_unused = tuple[pos] - 1;
    for (int prev = 0; prev < pos; ++prev)
      if (tuple[prev] < tuple[pos]) --smaller_unused;
    rank += smaller_unused * injective_tuple_count(n - pos - 1, m - pos - 1);
  }
  return rank;
}

namespace {

void check_shape_scale(const Shape& shape, int n) {
  shape.validate();
  if (n < shape.k)
    throw ValidationError("graph matrix: n must be >= the shape's vertex count");
  if (n > 64) throw ResourceError("graph matrix: n > 64 is outside desk scale");
  if (shape.U.size() > 2 || shape.V.size() > 2)
    throw ResourceError("graph matrix: |U|, |V| <= 2 at desk scale");
}

/// Enumerates injective phi: [k] -> [n] and hands each embedding to fn.
template <typename Fn>
void for_each_embedding(int k, int n, Fn&& fn) {
  std::vector<int> phi(k);
  std::vector<bool> used(n + 1, false);
  auto recurse = [&](auto&& self, int depth) -> void {
    if (depth == k) {
      fn(phi);
      return;
    }
    for (int v = 1; v <= n; ++v) {
      if (used[v]) continue;
      used[v] = true;
      phi[depth] = v;
      self(self, depth + 1);
      used[v] = false;
    }
  };
  recurse(recurse, 0);
}

std::vector<int> image_of(const std::vector<int>& verts, const std::vector<int>& phi) {
  std::vector<int> out;
  out.reserve(verts.size());
  for (int v : verts) out.push_back(phi[v - 1]);
  return out;
}

}  // namespace

Matrix build_graph_matrix(const Shape& shape, int n, const Vector& edge_vars) {
  check_shape_scale(shape, n);
  if (edge_vars.size() != num_edge_vars(n))
    throw ValidationError("graph matrix: edge vector must have C(n,2) entries");
  Matrix m = Matrix::Zero(injective_tuple_count(n, static_cast<int>(shape.U.size())),
                          injective_tuple_count(n, static_cast<int>(shape.V.size())));
  for_each_embedding(shape.k, n, [&](const std::vector<int>& phi) {
    double prod = 1.0;
    for (auto [u, v] : shape.edges) {
      prod *= edge_vars[edge_var_index(phi[u - 1], phi[v - 1], n)];
      if (prod == 0.0) break;
    }
    if (prod == 0.0) return;
    m(injective_tuple_rank(image_of(shape.U, phi), n),
      injective_tuple_rank(image_of(shape.V, phi), n)) += prod;
  });
  return m;
}

Matrix build_graph_matrix_decoupled(const Shape& shape, int n,
                                    const std::vector<Vector>& copies) {
  check_shape_scale(shape, n);
  if (copies.size() != shape.edges.size())
    throw ValidationError("decoupled graph matrix: need one copy per edge");
  for (const auto& g : copies)
    if (g.size() != num_edge_vars(n))
      throw ValidationError("decoupled graph matrix: edge vector size mismatch");
  Matrix m = Matrix::Zero(injective_tuple_count(n, static_cast<int>(shape.U.size())),
                          injective_tuple_count(n, static_cast<int>(shape.V.size())));
  for_each_embedding(shape.k, n, [&](const std::vector<int>& phi) {
    double prod = 1.0;
    for (std::size_t e = 0; e < shape.edges.size(); ++e) {
      auto [u, v] = shape.edges[e];
      prod *= copies[e][edge_var_index(phi[u - 1], phi[v - 1], n)];
      if (prod == 0.0) break;
    }
    if (prod == 0.0) return;
    m(injective_tuple_rank(image_of(shape.U, phi), n),
      injective_tuple_rank(image_of(shape.V, phi), n)) += prod;
  });
  return m;
}

PolyMatrix shape_to_polymatrix(const Shape& shape, int n, std::int64_t max_terms) {
  check_shape_scale(shape, n);
  const int rows = static_cast<int>(injective_tuple_count(n, static_cast<int>(shape.U.size())));
  const int cols = static_cast<int>(injective_tuple_count(n, static_cast<int>(shape.V.size())));
  std::map<VarSet, Matrix> terms;
  for_each_embedding(shape.k, n, [&](const std::vector<int>& phi) {
    VarSet key;
    key.reserve(shape.edges.size());
    for (auto [u, v] : shape.edges)
      key.push_back(edge_var_index(phi[u - 1], phi[v - 1], n) + 1);
    std::sort(key.begin(), key.end());
    auto it = terms.find(key);
    if (it == terms.end()) {
      if (static_cast<std::int64_t>(terms.size()) >= max_terms)
        throw ResourceError("shape_to_polymatrix: term cap exceeded");
      it = terms.emplace(std::move(key), Matrix::Zero(rows, cols)).first;
    }
    it->second(injective_tuple_rank(image_of(shape.U, phi), n),
               injective_tuple_rank(image_of(shape.V, phi), n)) += 1.0;
  });
  PolyMatrix out(num_edge_vars(n), rows, cols, /*multilinear=*/true);
  for (auto& [key, coeff] : terms) out.add_term(key, coeff);
  return out;
}

bool is_vertex_separator(const Shape& shape, const std::vector<int>& s) {
  std::vector<bool> removed(shape.k + 1, false);
  for (int v : s) removed[v] = true;
  std::vector<bool> reach(shape.k + 1, false);
  std::vector<int> queue;
  for (int v : shape.U)
    if (!removed[v] && !reach[v]) {
      reach[v] = true;
      queue.push_back(v);
    }
  std::vector<std::vector<int>> adjacency(shape.k + 1);
  for (auto [u, v] : shape.edges) {
    adjacency[u].push_back(v);
    adjacency[v].push_back(u);
  }
  while (!queue.empty()) {
    int v = queue.back();
    queue.pop_back();
    for (int w : adjacency[v])
      if (!removed[w] && !reach[w]) {
        reach[w] = true;
        queue.push_back(w);
      }
  }
  for (int v : shape.V)
    if (!removed[v] && reach[v]) return false;
  return true;
}

namespace {

std::vector<int> mask_to_set(unsigned mask, int k) {
  std::vector<int> out;
  for (int v = 1; v <= k; ++v)
    if (mask & (1u << (v - 1))) out.push_back(v);
  return out;
}

int adjacent_edge_count(const Shape& shape, const std::vector<int>& s) {
  std::vector<bool> in_s(shape.k + 1, false);
  for (int v : s) in_s[v] = true;
  int count = 0;
  for (auto [u, v] : shape.edges)
    if (in_s[u] || in_s[v]) ++count;
  return count;
}

int inside_edge_count(const Shape& shape, const std::vector<int>& s) {
  std::vector<bool> in_s(shape.k + 1, false);
  for (int v : s) in_s[v] = true;
  int count = 0;
  for (auto [u, v] : shape.edges)
    if (in_s[u] && in_s[v]) ++count;
  return count;
}

}  // namespace

SeparatorResult min_vertex_separator(const Shape& shape) {
  shape.validate();
  std::vector<std::vector<int>> by_size(shape.k + 1);
  for (unsigned mask = 0; mask < (1u << shape.k); ++mask)
    by_size[std::popcount(mask)].push_back(static_cast<int>(mask));
  for (int size = 0; size <= shape.k; ++size) {
    // lexicographically least vertex set first within one size class
    std::vector<std::vector<int>> candidates;
    for (int mask : by_size[size])
      candidates.push_back(mask_to_set(static_cast<unsigned>(mask), shape.k));
    std::sort(candidates.begin(), candidates.end());
    for (const auto& s : candidates) {
      if (!is_vertex_separator(shape, s)) continue;
      SeparatorResult result;
      result.separator = s;
      result.size = size;
      result.adjacent_edges = adjacent_edge_count(shape, s);
      return result;
    }
  }
  throw ValidationError("min_vertex_separator: no separator found");  // unreachable
}

CoverSeparator separator_from_cover(const Shape& shape,
                                    const std::vector<std::pair<int, int>>& e1,
                                    const std::vector<std::pair<int, int>>& e2) {
  shape.validate();
  auto normalize = [](std::vector<std::pair<int, int>> edges) {
    for (auto& [u, v] : edges)
      if (u > v) std::swap(u, v);
    std::sort(edges.begin(), edges.end());
    return edges;
  };
  std::vector<std::pair<int, int>> n1 = normalize(e1), n2 = normalize(e2);
  std::vector<std::pair<int, int>> all = n1;
  all.insert(all.end(), n2.begin(), n2.end());
  std::sort(all.begin(), all.end());
  all.erase(std::unique(all.begin(), all.end()), all.end());
  std::vector<std::pair<int, int>> shape_edges = normalize(shape.edges);
  if (all != shape_edges)
    throw ValidationError("separator_from_cover: E1 and E2 must cover E(tau)");

  auto vertex_set = [&](const std::vector<std::pair<int, int>>& edges) {
    std::set<int> verts;
    for (auto [u, v] : edges) {
      verts.insert(u);
      verts.insert(v);
    }
    return verts;
  };
  std::set<int> v1 = vertex_set(n1), v2 = vertex_set(n2);
  CoverSeparator out;
  std::set_intersection(v1.begin(), v1.end(), v2.begin(), v2.end(),
                        std::back_inserter(out.vertex_set));

  std::set<int> s_set(out.vertex_set.begin(), out.vertex_set.end());
  auto contained = [&](const std::set<int>& covered, const std::vector<int>& boundary) {
    for (int v : boundary)
      if (covered.count(v) && !s_set.count(v)) return false;
    return true;
  };
  bool v_side = contained(v1, shape.V);
  bool u_side = contained(v2, shape.U);
  out.hypothesis_holds = v_side && u_side;
  if (!out.hypothesis_holds) {
    out.reason = "cover claim premise fails: S must contain ";
    out.reason += !v_side ? "V(E1) /\\ V_tau" : "V(E2) /\\ U_tau";
  }
  out.bfs_separates = is_vertex_separator(shape, out.vertex_set);
  return out;
}

BoundReport shape_bound(const Shape& shape, int n, double p, int t,
                        double constant_C) {
  shape.validate();
  if (t < 2) throw ValidationError("t must be an integer >= 2");
  if (!(p > 0.0 && p < 1.0)) throw ValidationError("shape_bound requires 0 < p < 1");
  if (n < shape.k) throw ValidationError("shape_bound: n must be >= k");
  SeparatorResult sep = min_vertex_separator(shape);
  const int k = shape.k;
  const int d = shape.num_edges();
  const double log_n = std::log(static_cast<double>(n));
  const double log_delta = 0.5 * std::log((1.0 - p) / p);

  BoundReport report;
  report.theorem = TheoremId::graph_shape;
  report.t = t;
  report.normalization = Normalization::moment_power;
  report.product_form = true;

  BoundTerm recursion;
  recursion.label = "recursion_constant";
  recursion.log_constant = 4.0 * t * k * std::log(48.0 * t * k) +
                           (d > 0 ? d * std::log(constant_C * d) : 0.0) +
                           k * log_n;
  recursion.schatten = 1.0;
  recursion.log_contribution = recursion.log_constant;

  BoundTerm sparsity;
  sparsity.label = "bias_factor";
  sparsity.log_constant = 4.0 * t * sep.adjacent_edges * log_delta;
  sparsity.schatten = 1.0;
  sparsity.log_contribution = sparsity.log_constant;

  BoundTerm separator;
  separator.label = "separator_factor";
  separator.log_constant = 2.0 * t * (k - sep.size) * log_n;
  separator.schatten = 1.0;
  separator.log_contribution = separator.log_constant;

  report.terms = {recursion, sparsity, separator};
  report.finalize();
  report.notes["separator"] = sep.separator;
  report.notes["separator_size"] = sep.size;
  report.notes["adjacent_edges"] = sep.adjacent_edges;
  report.notes["C"] = constant_C;
  report.notes["edge_index_order"] = "lexicographic over pairs {i<j}";
  return report;
}

ShapeTailBound shape_tail_bound(const Shape& shape, int n, double p, double eps,
                                double constant_C) {
  shape.validate();
  if (!(eps > 0.0 && eps < 1.0))
    throw ValidationError("shape_tail_bound requires 0 < eps < 1");
  if (!(p > 0.0 && p < 1.0)) throw ValidationError("shape_tail_bound requires 0 < p < 1");
  const int k = shape.k;
  const int d = shape.num_edges();
  const double log_n = std::log(static_cast<double>(n));
  double t_real = 0.25 * ((d > 0 ? d * std::log(static_cast<double>(d)) : 0.0) +
                          k * log_n - std::log(eps));
  ShapeTailBound out;
  out.t = std::max(2, static_cast<int>(std::ceil(t_real)));
  SeparatorResult sep = min_vertex_separator(shape);
  const double t4 = 4.0 * out.t;
  const double log_delta = 0.5 * std::log((1.0 - p) / p);
  out.log_theta = -std::log(eps) / t4 + k * std::log(48.0 * out.t * k) +
                  (d > 0 ? d * std::log(constant_C * d) / t4 : 0.0) +
                  k * log_n / t4 + sep.adjacent_edges * log_delta +
                  0.5 * (k - sep.size) * log_n;
  out.theta = std::exp(out.log_theta);
  return out;
}

SparseSeparatorResult sparse_separator(const Shape& shape, double L, int n) {
  shape.validate();
  if (L <= 0.0) throw ValidationError("sparse_separator requires L > 0");
  if (n < 1) throw ValidationError("sparse_separator requires n >= 1");
  const double log_n = std::log(static_cast<double>(n));
  const double log_L = std::log(L);
  bool found = false;
  SparseSeparatorResult best;
  for (unsigned mask = 0; mask < (1u << shape.k); ++mask) {
    std::vector<int> s = mask_to_set(mask, shape.k);
    if (!is_vertex_separator(shape, s)) continue;
    int e_in = inside_edge_count(shape, s);
    double log_score = e_in * log_L +
                       0.5 * (shape.k - static_cast<int>(s.size())) * log_n;
    bool better = !found || log_score > best.log_score + 1e-15 ||
                  (std::abs(log_score - best.log_score) <= 1e-15 && s < best.separator);
    if (better) {
      best.separator = s;
      best.edges_inside = e_in;
      best.log_score = log_score;
      best.score = std::exp(log_score);
      found = true;
    }
  }
  return best;
}

MomentEstimate estimate_shape_moment(const Shape& shape, int n, double p,
                                     const MomentRequest& req,
                                     std::int64_t samples, std::uint64_t seed,
                                     int threads) {
  check_shape_scale(shape, n);
  DistributionSpec dist = DistributionSpec::pbiased(p);
  const int nvars = num_edge_vars(n);
  std::vector<double> values(samples);
  parallel_for(samples, threads, [&](std::int64_t i) {
    Vector g = sample_vector(dist, nvars, seed, static_cast<std::uint64_t>(i));
    Matrix m = build_graph_matrix(shape, n, g);
    double power = schatten_power(m, req.two_t);
    values[i] = req.power_form
                    ? power
                    : (power > 0.0 ? std::pow(power, 1.0 / req.two_t) : 0.0);
  });
  std::string label = "E||M||_" + std::to_string(req.two_t);
  if (req.power_form) label += "^" + std::to_string(req.two_t);
  return reduce_samples(std::move(values), std::move(label));
}

DecouplingCheck shape_decoupling_check(const Shape& shape, int n, double p,
                                       int t, std::int64_t samples,
                                       std::uint64_t seed, int threads) {
  check_shape_scale(shape, n);
  DistributionSpec dist = DistributionSpec::pbiased(p);
  const int nvars = num_edge_vars(n);
  const int d = shape.num_edges();
  const int two_t = 2 * t;

  std::vector<double> lhs_vals(samples), rhs_vals(samples);
  parallel_for(samples, threads, [&](std::int64_t i) {
    Vector g = sample_vector(dist, nvars, seed, static_cast<std::uint64_t>(i), 0);
    lhs_vals[i] = schatten_norm(build_graph_matrix(shape, n, g), two_t);
    std::vector<Vector> copies;
    copies.reserve(d);
    for (int j = 0; j < d; ++j)
      copies.push_back(sample_vector(dist, nvars, seed,
                                     static_cast<std::uint64_t>(i),
                                     static_cast<std::uint64_t>(j + 1)));
    rhs_vals[i] =
        schatten_norm(build_graph_matrix_decoupled(shape, n, copies), two_t);
  });
  DecouplingCheck check;
  check.lhs = reduce_samples(std::move(lhs_vals),
                             "E||M||_" + std::to_string(two_t));
  check.rhs = reduce_samples(std::move(rhs_vals),
                             "decoupled E||M||_" + std::to_string(two_t));
  check.constant = std::pow(static_cast<double>(shape.k), shape.k);
  double margin = 4.0 * std::sqrt(check.lhs.se * check.lhs.se +
                                  check.constant * check.constant *
                                      check.rhs.se * check.rhs.se);
  check.slack = check.constant * check.rhs.mean + margin - check.lhs.mean;
  check.holds = check.slack >= 0.0;
  return check;
}

double median_spectral_norm(const Shape& shape, int n, double p,
                            std::int64_t samples, std::uint64_t seed,
                            int threads) {
  check_shape_scale(shape, n);
  DistributionSpec dist = DistributionSpec::pbiased(p);
  const int nvars = num_edge_vars(n);
  std::vector<double> values(samples);
  parallel_for(samples, threads, [&](std::int64_t i) {
    Vector g = sample_vector(dist, nvars, seed, static_cast<std::uint64_t>(i));
    Vector sigma = singular_values(build_graph_matrix(shape, n, g));
    values[i] = sigma.size() > 0 ? sigma[0] : 0.0;
  });
  std::sort(values.begin(), values.end());
  const std::size_t half = values.size() / 2;
  return values.size() % 2 == 1 ? values[half]
                                : 0.5 * (values[half - 1] + values[half]);
}

}  // namespace polymat
