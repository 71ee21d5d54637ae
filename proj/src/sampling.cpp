#include "polymat/sampling.hpp"

#include <algorithm>
#include <cmath>

namespace polymat {

namespace {

constexpr std::uint64_t kGamma = 0x9E3779B97F4A7C15ULL;

std::uint64_t mix64(std::uint64_t z) {
  z ^= z >> 30;
  z *= 0xBF58476D1CE4E5B9ULL;
  z ^= z >> 27;
  z *= 0x94D049BB133111EBULL;
  z ^= z >> 31;
  return z;
}

}  // namespace

Rng::Rng(std::uint64_t seed, std::uint64_t stream, std::uint64_t index) {
  std::uint64_t s = mix64(seed + kGamma);
  s = mix64(s ^ (stream + 0xC2B2AE3D27D4EB4FULL));
  s = mix64(s ^ (index + 0x165667B19E3779F9ULL));
  state_ = s;
}

std::uint64_t Rng::next_u64() {
  state_ += kGamma;
  return mix64(state_);
}

double Rng::next_double() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double Rng::next_gaussian() {
  if (have_spare_) {
    have_spare_ = false;
    return spare_;
  }
  // (u + 0.5) * 2^-53 keeps u1 strictly inside (0, 1)
  double u1 = (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
  double u2 = next_double();
  double radius = std::sqrt(-2.0 * std::log(u1));
  double angle = 2.0 * M_PI * u2;
  spare_ = radius * std::sin(angle);
  have_spare_ = true;
  return radius * std::cos(angle);
}

double sample_scalar(const DistributionSpec& dist, Rng& rng) {
  switch (dist.kind) {
    case DistributionSpec::Kind::rademacher:
      return (rng.next_u64() & 1) ? 1.0 : -1.0;
    case DistributionSpec::Kind::pbiased:
      return rng.next_double() < dist.p ? dist.low_value() : dist.high_value();
    case DistributionSpec::Kind::gaussian:
      return rng.next_gaussian();
  }
  return 0.0;
}

Vector sample_vector(const DistributionSpec& dist, int n, std::uint64_t seed,
                     std::uint64_t stream, std::uint64_t index) {
  Rng rng(seed, stream, index);
  Vector x(n);
  for (int i = 0; i < n; ++i) x[i] = sample_scalar(dist, rng);
  return x;
}

namespace {

double norm_value(const Matrix& m, const MomentRequest& req) {
  double power = schatten_power(m, req.two_t);
  if (req.power_form) return power;
  return power > 0.0 ? std::pow(power, 1.0 / req.two_t) : 0.0;
}

std::string quantity_label(const MomentRequest& req) {
  std::string base = req.centered ? "E||F-EF||" : "E||F||";
  base += "_" + std::to_string(req.two_t);
  if (req.power_form) base += "^" + std::to_string(req.two_t);
  return base;
}

}  // namespace

MomentEstimate reduce_samples(std::vector<double> values, std::string quantity) {
  MomentEstimate est;
  est.n_samples = static_cast<std::int64_t>(values.size());
  est.quantity = std::move(quantity);
  if (values.empty()) return est;
  double vmax = *std::max_element(values.begin(), values.end());
  if (vmax > 1e280) {
    // keep second moments representable: work with log values
    std::vector<double> logs(values.size()), logs2(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) {
      logs[i] = values[i] > 0.0 ? std::log(values[i]) : kNegInf;
      logs2[i] = 2.0 * logs[i];
    }
    double n = static_cast<double>(values.size());
    double log_mean = log_sum_exp(logs) - std::log(n);
    double log_m2 = log_sum_exp(logs2) - std::log(n);
    est.mean = std::exp(log_mean);
    double var = std::exp(log_m2) - est.mean * est.mean;
    est.se = values.size() > 1 ? std::sqrt(std::max(0.0, var) / (n - 1.0)) : 0.0;
    return est;
  }
  MeanStderr ms = mean_stderr(values);
  est.mean = ms.mean;
  est.se = ms.se;
  return est;
}

MomentEstimate estimate_moment(const PolyMatrix& f, const SampleConfig& cfg,
                               const MomentRequest& req, int threads) {
  if (cfg.samples < 1) throw ValidationError("sample count must be >= 1");
  if (cfg.n != f.n()) throw ValidationError("sample config n != polynomial n");
  Matrix center = Matrix::Zero(f.rows(), f.cols());
  if (req.centered) center = f.expectation(cfg.dist);
  std::vector<double> values(cfg.samples);
  parallel_for(cfg.samples, threads, [&](std::int64_t i) {
    Vector x = sample_vector(cfg.dist, cfg.n, cfg.seed, static_cast<std::uint64_t>(i));
    values[i] = norm_value(f.evaluate(x) - center, req);
  });
  return reduce_samples(std::move(values), quantity_label(req));
}

MomentEstimate estimate_decoupled_moment(const PolyMatrix& f,
                                         const SampleConfig& cfg,
                                         const MomentRequest& req, int threads) {
  if (cfg.samples < 1) throw ValidationError("sample count must be >= 1");
  if (cfg.n != f.n()) throw ValidationError("sample config n != polynomial n");
  const int d = f.degree();
  std::vector<double> values(cfg.samples);
  parallel_for(cfg.samples, threads, [&](std::int64_t i) {
    std::vector<Vector> copies;
    copies.reserve(d);
    for (int j = 0; j < d; ++j)
      copies.push_back(sample_vector(cfg.dist, cfg.n, cfg.seed,
                                     static_cast<std::uint64_t>(i),
                                     static_cast<std::uint64_t>(j + 1)));
    values[i] = norm_value(f.evaluate_decoupled(copies), req);
  });
  MomentRequest labeled = req;
  labeled.centered = false;
  return reduce_samples(std::move(values),
                        "decoupled " + quantity_label(labeled));
}

DecouplingCheck decoupling_ratio(const PolyMatrix& f, const SampleConfig& cfg,
                                 DecouplingForm form, int threads) {
  if (!f.is_multilinear_content() || !f.is_homogeneous() || f.degree() < 1)
    throw ValidationError("decoupling_ratio requires a homogeneous multilinear polynomial");
  const int d = f.degree();
  MomentRequest req;
  req.two_t = 2 * cfg.t;
  req.power_form = form == DecouplingForm::power;
  req.centered = false;
  DecouplingCheck check;
  check.lhs = estimate_moment(f, cfg, req, threads);
  check.rhs = estimate_decoupled_moment(f, cfg, req, threads);
  check.constant = form == DecouplingForm::norm
                       ? std::pow(static_cast<double>(d), d)
                       : std::pow(static_cast<double>(d), d * req.two_t);
  double margin = 4.0 * std::sqrt(check.lhs.se * check.lhs.se +
                                  check.constant * check.constant *
                                      check.rhs.se * check.rhs.se);
  check.slack = check.constant * check.rhs.mean + margin - check.lhs.mean;
  check.holds = check.slack >= 0.0;
  return check;
}

RosenthalCheck rosenthal_empirical(const std::vector<Matrix>& coefficients,
                                   const DistributionSpec& dist, int t,
                                   std::int64_t samples, std::uint64_t seed,
                                   int threads) {
  RosenthalCheck check;
  check.rhs = rosenthal_rhs(coefficients, dist, t);
  const int n = static_cast<int>(coefficients.size());
  std::vector<double> values(samples);
  const Eigen::Index r = n > 0 ? coefficients.front().rows() : 1;
  const Eigen::Index c = n > 0 ? coefficients.front().cols() : 1;
  parallel_for(samples, threads, [&](std::int64_t i) {
    Vector x = sample_vector(dist, n, seed, static_cast<std::uint64_t>(i));
    Matrix sum = Matrix::Zero(r, c);
    for (int k = 0; k < n; ++k) sum += x[k] * coefficients[k];
    values[i] = schatten_power(sum, 4 * t);
  });
  check.lhs = reduce_samples(std::move(values),
                             "E||sum C_k x_k||_" + std::to_string(4 * t) + "^" +
                                 std::to_string(4 * t));
  double lhs_upper = check.lhs.mean + 4.0 * check.lhs.se;
  check.holds = lhs_upper <= 0.0 ||
                std::log(lhs_upper) <= check.rhs.log_total;
  return check;
}

bool dominates(const BoundReport& report, const MomentEstimate& mc,
               double stderr_margin) {
  double upper = mc.mean + stderr_margin * mc.se;
  if (upper <= 0.0) return true;
  double log_bound = report.log_total;
  if (report.normalization == Normalization::moment_root)
    log_bound *= 4.0 * report.t;
  return std::log(upper) <= log_bound;
}

}  // namespace polymat
