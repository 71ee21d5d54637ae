#include "polymat/melon.hpp"

#include <cmath>
#include <string>

namespace polymat {

MelonInstance build_melon(int n, std::uint64_t seed, std::uint64_t stream) {
  if (n < 2) throw ValidationError("build_melon requires n >= 2");
  MelonInstance inst;
  inst.n = n;
  inst.unfolding = Matrix(n, n * n);
  Rng rng(seed, stream, 0);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n * n; ++j) inst.unfolding(i, j) = rng.next_gaussian();
  inst.gram = inst.unfolding * inst.unfolding.transpose();
  return inst;
}

Matrix melon_mean(int n) {
  return static_cast<double>(n) * n * Matrix::Identity(n, n);
}

int melon_var(int i, int k, int l, int n) {
  return ((i - 1) * n + (k - 1)) * n + l;
}

PolyMatrix melon_polymatrix(int n) {
  if (n < 2) throw ValidationError("melon_polymatrix requires n >= 2");
  PolyMatrix p(n * n * n, n, n, /*multilinear=*/false);
  for (int k = 1; k <= n; ++k)
    for (int l = 1; l <= n; ++l)
      for (int i = 1; i <= n; ++i) {
        Matrix diag = Matrix::Zero(n, n);
        diag(i - 1, i - 1) = 1.0;
        int vi = melon_var(i, k, l, n);
        p.add_term({vi, vi}, diag);
        for (int j = i + 1; j <= n; ++j) {
          Matrix off = Matrix::Zero(n, n);
          off(i - 1, j - 1) = 1.0;
          off(j - 1, i - 1) = 1.0;
          p.add_term({vi, melon_var(j, k, l, n)}, off);
        }
      }
  return p;
}

MelonBlocks melon_blocks(int n, int max_n) {
  if (n > max_n)
    throw ResourceError("melon_blocks: n = " + std::to_string(n) +
                        " exceeds the block materialization cap " +
                        std::to_string(max_n));
  PolyMatrix p = melon_polymatrix(n);
  DistributionSpec gauss = DistributionSpec::gaussian();
  return MelonBlocks{
      build_gaussian_block(p, 2, 0).expected(gauss),
      build_gaussian_block(p, 0, 2).expected(gauss),
      build_gaussian_block(p, 1, 1).expected(gauss),
  };
}

double melon_m02_schatten_exact(int n, int t) {
  // Gram over ordered derivative pairs: 4n^2 I from the i=j blocks plus
  // 2n^2(n-1) I from i != j, i.e. 2n^2(n+1) I.
  double gram_scale = 2.0 * n * n * (n + 1.0);
  return n * std::pow(gram_scale, t);
}

double melon_m11_schatten_exact(int n, int t) {
  Matrix d = Matrix::Zero(n * n, n * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      // block (i,j) of D is 2 E_ii when i=j, E_ij + E_ji otherwise
      if (i == j) {
        d(i * n + i, j * n + i) += 2.0;
      } else {
        d(i * n + i, j * n + j) += 1.0;
        d(i * n + j, j * n + i) += 1.0;
      }
    }
  return n * n * schatten_power(d, 2 * t);
}

BoundReport melon_bound(int n, int t) {
  if (n < 2) throw ValidationError("melon_bound requires n >= 2");
  if (t < 1) throw ValidationError("melon_bound requires t >= 1");
  BoundReport report;
  report.theorem = TheoremId::melon;
  report.t = t;
  report.normalization = Normalization::moment_power;
  const double log_c = 2.0 * t * std::log(8.0 * t);
  const double closed_gram = n * std::pow(2.0 * n * n + std::pow(n, 3.0), t);
  const double closed_diag =
      n * n * std::pow(4.0 * n + 2.0 * n * n, t);

  auto push = [&](const std::string& label, double value) {
    BoundTerm term;
    term.label = label;
    term.log_constant = log_c;
    term.schatten = value;
    term.log_contribution = value > 0.0 ? log_c + std::log(value) : kNegInf;
    report.terms.push_back(std::move(term));
  };
  push("M_{2,0} closed form", closed_gram);
  push("M_{0,2} closed form", closed_gram);
  push("M_{1,1} closed form", closed_diag);
  report.finalize();
  report.notes["schatten_exact_m20"] = melon_m02_schatten_exact(n, t);
  report.notes["schatten_exact_m02"] = melon_m02_schatten_exact(n, t);
  if (n <= 24) report.notes["schatten_exact_m11"] = melon_m11_schatten_exact(n, t);
  return report;
}

MomentEstimate melon_moment(int n, int t, std::int64_t samples,
                            std::uint64_t seed, int threads) {
  if (samples < 1) throw ValidationError("sample count must be >= 1");
  Matrix mean = melon_mean(n);
  std::vector<double> values(samples);
  parallel_for(samples, threads, [&](std::int64_t i) {
    MelonInstance inst = build_melon(n, seed, static_cast<std::uint64_t>(i));
    values[i] = schatten_power(inst.gram - mean, 2 * t);
  });
  return reduce_samples(std::move(values),
                        "E||M-EM||_" + std::to_string(2 * t) + "^" +
                            std::to_string(2 * t));
}

MomentEstimate melon_spectral_moment(int n, int t, std::int64_t samples,
                                     std::uint64_t seed, int threads) {
  if (samples < 1) throw ValidationError("sample count must be >= 1");
  Matrix mean = melon_mean(n);
  std::vector<double> values(samples);
  parallel_for(samples, threads, [&](std::int64_t i) {
    MelonInstance inst = build_melon(n, seed, static_cast<std::uint64_t>(i));
    Vector sigma = singular_values(inst.gram - mean);
    values[i] = std::pow(sigma.size() > 0 ? sigma[0] : 0.0, 2 * t);
  });
  return reduce_samples(std::move(values),
                        "E sigma_max(M-EM)^" + std::to_string(2 * t));
}

}  // namespace polymat
