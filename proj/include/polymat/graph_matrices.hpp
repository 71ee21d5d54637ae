#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "polymat/bounds.hpp"
#include "polymat/sampling.hpp"

namespace polymat {

/// Template graph with ordered boundary tuples. Vertices are 1..k; edges are
/// unordered distinct pairs.
struct Shape {
  int k = 0;
  std::vector<std::pair<int, int>> edges;  // stored with first < second
  std::vector<int> U;
  std::vector<int> V;

  /// Throws on malformed shapes; returns validator warnings (isolated
  /// vertices outside U and V).
  std::vector<std::string> validate() const;

  int num_edges() const { return static_cast<int>(edges.size()); }
};

Shape parse_shape(const nlohmann::json& doc);
Shape parse_shape(const std::string& text);
Shape load_shape(const std::string& path);
nlohmann::json serialize(const Shape& shape);

/// Canonical lexicographic bijection between unordered pairs {i<j} of [1..n]
/// and 0-based edge-variable slots.
int edge_var_index(int i, int j, int n);
int num_edge_vars(int n);

/// Lexicographic rank of an injective tuple over [1..n].
std::int64_t injective_tuple_rank(const std::vector<int>& tuple, int n);
std::int64_t injective_tuple_count(int n, int m);

/// M[I,J] = sum over injective embeddings phi with phi(U)=I, phi(V)=J of the
/// product of edge variables along the shape's edges.
Matrix build_graph_matrix(const Shape& shape, int n, const Vector& edge_vars);

/// Decoupled variant: the m-th edge of the shape reads the m-th copy.
Matrix build_graph_matrix_decoupled(const Shape& shape, int n,
                                    const std::vector<Vector>& copies);

/// The same matrix as a multilinear polynomial over the edge variables.
PolyMatrix shape_to_polymatrix(const Shape& shape, int n,
                               std::int64_t max_terms = Limits{}.max_terms);

struct SeparatorResult {
  std::vector<int> separator;  // sorted
  int size = 0;
  int adjacent_edges = 0;      // |E(S)|: edges with an endpoint in S
};

/// Minimum-cardinality vertex separator between U and V, lexicographically
/// least among optima; exhaustive over subsets (k <= 16).
SeparatorResult min_vertex_separator(const Shape& shape);

/// BFS check used to re-verify every separator result.
bool is_vertex_separator(const Shape& shape, const std::vector<int>& s);

struct CoverSeparator {
  std::vector<int> vertex_set;   // V(E1) ∩ V(E2)
  bool hypothesis_holds = false; // containment premise of the cover claim
  bool bfs_separates = false;
  std::string reason;
};

/// S = V(E1) ∩ V(E2) for a cover E1 ∪ E2 = E; a separator whenever S contains
/// V(E1) ∩ V_tau and V(E2) ∩ U_tau. Refusal (hypothesis_holds = false) when
/// the containment fails; the BFS verdict is reported either way.
CoverSeparator separator_from_cover(const Shape& shape,
                                    const std::vector<std::pair<int, int>>& e1,
                                    const std::vector<std::pair<int, int>>& e2);

/// E||M||_{4t}^{4t} <= (48t k)^{4tk} (C|E|)^{|E|} n^k * Delta_p^{4t|E(S)|}
///                     * n^{2t(k-|S|)}, factor groups itemized in log space.
BoundReport shape_bound(const Shape& shape, int n, double p, int t,
                        double constant_C = 3.0);

struct ShapeTailBound {
  double theta = 0.0;
  double log_theta = 0.0;
  int t = 2;
};

/// Threshold with Pr[||M|| >= theta] <= eps, t = max(2, ceil(log(...)/4)).
ShapeTailBound shape_tail_bound(const Shape& shape, int n, double p, double eps,
                                double constant_C = 3.0);

struct SparseSeparatorResult {
  std::vector<int> separator;
  int edges_inside = 0;    // e(S): edges with both endpoints in S
  double log_score = 0.0;  // e(S) log L + (k-|S|)/2 log n
  double score = 0.0;
};

/// Vertex separator maximizing L^{e(S)} n^{(k-|S|)/2}; exhaustive, k <= 16.
SparseSeparatorResult sparse_separator(const Shape& shape, double L, int n);

/// Monte Carlo estimate of E||M||_{two_t}^{two_t or 1} over p-biased edges.
MomentEstimate estimate_shape_moment(const Shape& shape, int n, double p,
                                     const MomentRequest& req,
                                     std::int64_t samples, std::uint64_t seed,
                                     int threads = 0);

/// Decoupling check with the index-structured constant k^k.
DecouplingCheck shape_decoupling_check(const Shape& shape, int n, double p,
                                       int t, std::int64_t samples,
                                       std::uint64_t seed, int threads = 0);

/// Median sampled spectral norm (largest singular value).
double median_spectral_norm(const Shape& shape, int n, double p,
                            std::int64_t samples, std::uint64_t seed,
                            int threads = 0);

}  // namespace polymat
