#include "polymat/common.hpp"

#include <algorithm>
#include <cstdlib>
#include <thread>

namespace polymat {

int max_threads() {
  int cap = static_cast<int>(std::thread::hardware_concurrency());
  if (cap <= 0) cap = 1;
  if (const char* env = std::getenv("POLYMAT_THREADS")) {
    char* end = nullptr;
    long v = std::strtol(env, &end, 10);
    if (end != env && v >= 1) cap = std::min<long>(cap, v);
  }
  return cap;
}

int effective_threads(int requested) {
  int cap = max_threads();
  if (requested <= 0) return cap;
  return std::min(requested, cap);
}

void parallel_for(std::int64_t count, int threads,
                  const std::function<void(std::int64_t)>& fn) {
  if (count <= 0) return;
  int workers = effective_threads(threads);
  workers = static_cast<int>(std::min<std::int64_t>(workers, count));
  if (workers <= 1) {
    for (std::int64_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(workers);
  std::int64_t chunk = (count + workers - 1) / workers;
  for (int w = 0; w < workers; ++w) {
    std::int64_t begin = w * chunk;
    std::int64_t end = std::min(count, begin + chunk);
    if (begin >= end) break;
    pool.emplace_back([begin, end, &fn] {
      for (std::int64_t i = begin; i < end; ++i) fn(i);
    });
  }
  for (auto& th : pool) th.join();
}

namespace {

double pairwise_sum_range(const double* v, std::size_t count) {
  if (count <= 8) {
    double s = 0.0;
    for (std::size_t i = 0; i < count; ++i) s += v[i];
    return s;
  }
  std::size_t half = count / 2;
  return pairwise_sum_range(v, half) + pairwise_sum_range(v + half, count - half);
}

}  // namespace

double pairwise_sum(std::span<const double> values) {
  return pairwise_sum_range(values.data(), values.size());
}

MeanStderr mean_stderr(std::span<const double> values) {
  MeanStderr out;
  const std::size_t n = values.size();
  if (n == 0) return out;
  out.mean = pairwise_sum(values) / static_cast<double>(n);
  if (n == 1) return out;
  std::vector<double> sq(n);
  for (std::size_t i = 0; i < n; ++i) {
    double d = values[i] - out.mean;
    sq[i] = d * d;
  }
  double var = pairwise_sum(sq) / static_cast<double>(n - 1);
  out.se = std::sqrt(var / static_cast<double>(n));
  return out;
}

double log_sum_exp(std::span<const double> log_values) {
  if (log_values.empty()) return kNegInf;
  double m = kNegInf;
  for (double v : log_values) m = std::max(m, v);
  if (!std::isfinite(m)) return m;
  std::vector<double> shifted(log_values.size());
  for (std::size_t i = 0; i < log_values.size(); ++i)
    shifted[i] = std::exp(log_values[i] - m);
  return m + std::log(pairwise_sum(shifted));
}

LineFit fit_line(std::span<const double> xs, std::span<const double> ys) {
  LineFit fit;
  const std::size_t n = xs.size();
  if (n < 2 || ys.size() != n) return fit;
  double sx = 0, sy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sx += xs[i];
    sy += ys[i];
  }
  double mx = sx / n, my = sy / n;
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
  }
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  return fit;
}

}  // namespace polymat
