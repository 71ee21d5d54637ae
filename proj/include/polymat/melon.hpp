#pragma once

#include <cstdint>

#include "polymat/bounds.hpp"
#include "polymat/sampling.hpp"

namespace polymat {

/// Order-3 Gaussian tensor with its first-mode slice Gram matrix
/// M[i,j] = <T_i, T_j>.
struct MelonInstance {
  int n = 0;
  Matrix unfolding;  // n x n^2, row i = slice T_i flattened
  Matrix gram;       // n x n
};

MelonInstance build_melon(int n, std::uint64_t seed, std::uint64_t stream = 0);

/// E M = n^2 I (Wick).
Matrix melon_mean(int n);

/// Tensor-entry variable id for slice i, position (k, l); 1-based, n^3 total.
int melon_var(int i, int k, int l, int n);

/// M as a degree-2 homogeneous Gaussian polynomial over the n^3 entries.
PolyMatrix melon_polymatrix(int n);

struct MelonBlocks {
  DerivativeBlock m20;
  DerivativeBlock m02;
  DerivativeBlock m11;
};

/// Exact second-derivative block matrices (sparse; n kept modest).
MelonBlocks melon_blocks(int n, int max_n = 10);

/// (8t)^{2t} (||M_{2,0}|| + ||M_{0,2}|| + ||M_{1,1}||) with the closed-form
/// Schatten surrogates n(2n^2+n^3)^t and n^2(4n+2n^2)^t; exact sparse values
/// are attached as notes.
BoundReport melon_bound(int n, int t);

/// Exact ||M_{0,2}||_{2t}^{2t} = n (2n^2(n+1))^t ; the Gram is a multiple of I.
double melon_m02_schatten_exact(int n, int t);

/// Exact ||M_{1,1}||_{2t}^{2t} = n^2 ||D||_{2t}^{2t} for the n^2-dimensional
/// diagonal block D (same for every (k,l)).
double melon_m11_schatten_exact(int n, int t);

/// Monte Carlo estimate of E||M - EM||_{2t}^{2t}.
MomentEstimate melon_moment(int n, int t, std::int64_t samples,
                            std::uint64_t seed, int threads = 0);

/// Monte Carlo estimate of E sigma_max(M - EM)^{2t} (spectral-norm power).
MomentEstimate melon_spectral_moment(int n, int t, std::int64_t samples,
                                     std::uint64_t seed, int threads = 0);

}  // namespace polymat
