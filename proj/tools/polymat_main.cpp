#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "polymat/suite.hpp"

namespace {

using nlohmann::json;
using namespace polymat;

constexpr int kExitOk = 0;
constexpr int kExitValidation = 2;
constexpr int kExitResource = 3;

struct CommonArgs {
  std::string out_path;
  std::string format = "json";
  int threads = 0;
};

void add_common(CLI::App* cmd, CommonArgs& args) {
  cmd->add_option("--out", args.out_path, "Write the report to this path (default: stdout)");
  cmd->add_option("--format", args.format, "Output format: json or csv")
      ->check(CLI::IsMember({"json", "csv"}));
  cmd->add_option("--threads", args.threads, "Worker cap (0 = auto; POLYMAT_THREADS also caps)");
}

void emit(const CommonArgs& args, const json& doc, const std::string& csv) {
  std::string payload =
      args.format == "csv" ? csv : doc.dump(2) + "\n";
  if (args.out_path.empty()) {
    std::cout << payload;
    return;
  }
  std::ofstream out(args.out_path, std::ios::binary);
  if (!out) throw ValidationError("cannot open output path: " + args.out_path);
  out << payload;
}

DistributionSpec make_dist(const std::string& name, double p) {
  if (name == "rademacher") return DistributionSpec::rademacher();
  if (name == "gaussian") return DistributionSpec::gaussian();
  if (name == "pbiased") return DistributionSpec::pbiased(p);
  throw ValidationError("unknown distribution: " + name);
}

json dist_json(const DistributionSpec& dist) {
  json j;
  j["kind"] = dist.name();
  if (dist.kind == DistributionSpec::Kind::pbiased) j["p"] = dist.p;
  if (dist.bounded()) j["L"] = dist.bound_L();
  return j;
}

json estimate_json(const MomentEstimate& est) {
  return json{{"quantity", est.quantity},
              {"mean", est.mean},
              {"stderr", est.se},
              {"samples", est.n_samples}};
}

std::string estimate_csv(const MomentEstimate& est) {
  std::ostringstream out;
  out << "quantity,mean,stderr,samples\n";
  out << '"' << est.quantity << "\"," << est.mean << ',' << est.se << ','
      << est.n_samples << '\n';
  return out.str();
}

json check_json(const DecouplingCheck& check) {
  return json{{"lhs", estimate_json(check.lhs)},
              {"rhs", estimate_json(check.rhs)},
              {"constant", check.constant},
              {"holds", check.holds},
              {"slack", check.slack}};
}

int run_cli(int argc, char** argv) {
  CLI::App app{"Norm bounds for polynomial random matrices, with Monte Carlo checks"};
  app.require_subcommand(1);

  // ---- bound ----
  auto* bound_cmd = app.add_subcommand("bound", "Evaluate a recursion bound for a polynomial spec");
  CommonArgs bound_common;
  std::string bound_spec, bound_dist = "rademacher", bound_theorem = "auto";
  double bound_p = 0.5;
  int bound_t = 2;
  std::int64_t bound_gram_cap = Limits{}.max_gram_dim;
  bound_cmd->add_option("--spec", bound_spec, "PolyMatrix JSON document")->required();
  bound_cmd->add_option("--dist", bound_dist, "rademacher | pbiased | gaussian");
  bound_cmd->add_option("--p", bound_p, "Bias for pbiased");
  bound_cmd->add_option("--t", bound_t, "Moment parameter t >= 2");
  bound_cmd->add_option("--theorem", bound_theorem,
                        "auto | quadratic | homogeneous | multilinear | gaussian");
  bound_cmd->add_option("--gram-cap", bound_gram_cap, "Dense Gram dimension cap");
  add_common(bound_cmd, bound_common);

  // ---- mc ----
  auto* mc_cmd = app.add_subcommand("mc", "Monte Carlo Schatten moment estimate");
  CommonArgs mc_common;
  std::string mc_spec, mc_dist = "rademacher", mc_order = "2t", mc_form = "power";
  double mc_p = 0.5;
  int mc_t = 2;
  std::int64_t mc_samples = 10000;
  std::uint64_t mc_seed = 0;
  bool mc_raw = false;
  mc_cmd->add_option("--spec", mc_spec)->required();
  mc_cmd->add_option("--dist", mc_dist);
  mc_cmd->add_option("--p", mc_p);
  mc_cmd->add_option("--t", mc_t, "Moment parameter t >= 1");
  mc_cmd->add_option("--samples", mc_samples);
  mc_cmd->add_option("--seed", mc_seed);
  mc_cmd->add_option("--order", mc_order, "Schatten order: 2t or 4t")
      ->check(CLI::IsMember({"2t", "4t"}));
  mc_cmd->add_option("--form", mc_form, "power (||.||^order) or norm")
      ->check(CLI::IsMember({"power", "norm"}));
  mc_cmd->add_flag("--raw", mc_raw, "Skip centering by E F");
  add_common(mc_cmd, mc_common);

  // ---- decouple ----
  auto* dec_cmd = app.add_subcommand("decouple", "Empirical decoupling inequality check");
  CommonArgs dec_common;
  std::string dec_spec, dec_shape, dec_dist = "rademacher", dec_mode = "norm";
  double dec_p = 0.5;
  int dec_t = 2, dec_n = 0;
  std::int64_t dec_samples = 20000;
  std::uint64_t dec_seed = 0;
  dec_cmd->add_option("--spec", dec_spec, "PolyMatrix JSON (generic d^d constant)");
  dec_cmd->add_option("--shape", dec_shape, "Shape JSON (graph-structured k^k constant)");
  dec_cmd->add_option("--n", dec_n, "Ambient vertex count for --shape");
  dec_cmd->add_option("--dist", dec_dist);
  dec_cmd->add_option("--p", dec_p);
  dec_cmd->add_option("--t", dec_t);
  dec_cmd->add_option("--samples", dec_samples);
  dec_cmd->add_option("--seed", dec_seed);
  dec_cmd->add_option("--mode", dec_mode, "norm (E||.||) or power (E||.||^{2t})")
      ->check(CLI::IsMember({"norm", "power"}));
  add_common(dec_cmd, dec_common);

  // ---- rosenthal ----
  auto* ros_cmd = app.add_subcommand("rosenthal", "Matrix Rosenthal RHS and empirical check");
  CommonArgs ros_common;
  std::string ros_spec, ros_dist = "rademacher";
  double ros_p = 0.5;
  int ros_t = 2;
  std::int64_t ros_samples = 10000;
  std::uint64_t ros_seed = 0;
  bool ros_use_L = false;
  ros_cmd->add_option("--spec", ros_spec, "Degree-1 PolyMatrix JSON (the coefficient series)")
      ->required();
  ros_cmd->add_option("--dist", ros_dist);
  ros_cmd->add_option("--p", ros_p);
  ros_cmd->add_option("--t", ros_t);
  ros_cmd->add_option("--samples", ros_samples);
  ros_cmd->add_option("--seed", ros_seed);
  ros_cmd->add_flag("--use-L", ros_use_L, "Bound the diagonal term by L^{4t}");
  add_common(ros_cmd, ros_common);

  // ---- shape ----
  auto* shape_cmd = app.add_subcommand("shape", "Graph-matrix norm bound for a shape");
  CommonArgs shape_common;
  std::string shape_path;
  int shape_n = 10, shape_t = 2;
  double shape_p = 0.5, shape_C = 3.0, shape_eps = 0.0;
  bool shape_check = false;
  std::int64_t shape_samples = 400;
  std::uint64_t shape_seed = 0;
  shape_cmd->add_option("--shape", shape_path, "Shape JSON document")->required();
  shape_cmd->add_option("--n", shape_n)->required();
  shape_cmd->add_option("--p", shape_p);
  shape_cmd->add_option("--t", shape_t);
  shape_cmd->add_option("--c", shape_C, "Absolute constant C");
  shape_cmd->add_flag("--check", shape_check, "Add an empirical dominance verdict");
  shape_cmd->add_option("--samples", shape_samples);
  shape_cmd->add_option("--seed", shape_seed);
  shape_cmd->add_option("--tail", shape_eps, "Also report the tail threshold for this epsilon");
  add_common(shape_cmd, shape_common);

  // ---- melon ----
  auto* melon_cmd = app.add_subcommand("melon", "Tensor-network Gram matrix bound");
  CommonArgs melon_common;
  int melon_n = 6, melon_t = 2;
  bool melon_check = false;
  std::int64_t melon_samples = 2000;
  std::uint64_t melon_seed = 0;
  melon_cmd->add_option("--n", melon_n)->required();
  melon_cmd->add_option("--t", melon_t);
  melon_cmd->add_flag("--check", melon_check, "Add an empirical dominance verdict");
  melon_cmd->add_option("--samples", melon_samples);
  melon_cmd->add_option("--seed", melon_seed);
  add_common(melon_cmd, melon_common);

  // ---- suite ----
  auto* suite_cmd = app.add_subcommand("suite", "Run the full acceptance corpus");
  CommonArgs suite_common;
  std::uint64_t suite_seed = suite::kDefaultSeed;
  suite_cmd->add_option("--seed", suite_seed);
  add_common(suite_cmd, suite_common);

  CLI11_PARSE(app, argc, argv);

  if (bound_cmd->parsed()) {
    PolyMatrix f = load_polymatrix(bound_spec);
    DistributionSpec dist = make_dist(bound_dist, bound_p);
    BoundOptions opts;
    opts.max_gram_dim = bound_gram_cap;
    std::string theorem = bound_theorem;
    if (theorem == "auto") {
      if (dist.kind == DistributionSpec::Kind::gaussian)
        theorem = "gaussian";
      else if (f.is_homogeneous())
        theorem = "homogeneous";
      else
        theorem = "multilinear";
    }
    BoundReport report;
    if (theorem == "quadratic")
      report = quadratic_bound(f, dist, bound_t, opts);
    else if (theorem == "homogeneous")
      report = homogeneous_multilinear_bound(f, dist, bound_t, opts);
    else if (theorem == "multilinear")
      report = multilinear_bound(f, dist, bound_t, opts);
    else if (theorem == "gaussian")
      report = gaussian_bound(f, bound_t, opts);
    else
      throw ValidationError("unknown theorem: " + theorem);
    json doc;
    doc["config"] = {{"command", "bound"},  {"spec", bound_spec},
                     {"dist", dist_json(dist)}, {"t", bound_t},
                     {"theorem", theorem},  {"gram_cap", bound_gram_cap}};
    doc["report"] = report.to_json();
    emit(bound_common, doc, report.to_csv());
    return kExitOk;
  }

  if (mc_cmd->parsed()) {
    PolyMatrix f = load_polymatrix(mc_spec);
    DistributionSpec dist = make_dist(mc_dist, mc_p);
    if (mc_t < 1) throw ValidationError("mc: t must be >= 1");
    MomentRequest req;
    req.two_t = (mc_order == "4t" ? 4 : 2) * mc_t;
    req.power_form = mc_form == "power";
    req.centered = !mc_raw;
    SampleConfig cfg{dist, f.n(), mc_samples, mc_seed, mc_t};
    MomentEstimate est = estimate_moment(f, cfg, req, mc_common.threads);
    json doc;
    doc["config"] = {{"command", "mc"},       {"spec", mc_spec},
                     {"dist", dist_json(dist)}, {"t", mc_t},
                     {"order", mc_order},      {"form", mc_form},
                     {"centered", req.centered}, {"samples", mc_samples},
                     {"seed", mc_seed}};
    doc["estimate"] = estimate_json(est);
    emit(mc_common, doc, estimate_csv(est));
    return kExitOk;
  }

  if (dec_cmd->parsed()) {
    if (dec_spec.empty() == dec_shape.empty())
      throw ValidationError("decouple: pass exactly one of --spec or --shape");
    DecouplingForm form =
        dec_mode == "norm" ? DecouplingForm::norm : DecouplingForm::power;
    json doc;
    DecouplingCheck check;
    if (!dec_spec.empty()) {
      PolyMatrix f = load_polymatrix(dec_spec);
      DistributionSpec dist = make_dist(dec_dist, dec_p);
      SampleConfig cfg{dist, f.n(), dec_samples, dec_seed, dec_t};
      check = decoupling_ratio(f, cfg, form, dec_common.threads);
      doc["config"] = {{"command", "decouple"}, {"spec", dec_spec},
                       {"dist", dist_json(dist)}, {"t", dec_t},
                       {"mode", dec_mode},       {"samples", dec_samples},
                       {"seed", dec_seed}};
    } else {
      if (dec_n <= 0) throw ValidationError("decouple --shape requires --n");
      if (form != DecouplingForm::norm)
        throw ValidationError("decouple --shape supports --mode norm only");
      Shape shape = load_shape(dec_shape);
      check = shape_decoupling_check(shape, dec_n, dec_p, dec_t, dec_samples,
                                     dec_seed, dec_common.threads);
      doc["config"] = {{"command", "decouple"}, {"shape", dec_shape},
                       {"n", dec_n},            {"p", dec_p},
                       {"t", dec_t},            {"mode", dec_mode},
                       {"samples", dec_samples}, {"seed", dec_seed}};
    }
    doc["check"] = check_json(check);
    std::ostringstream csv;
    csv << "quantity,mean,stderr,samples\n";
    csv << '"' << check.lhs.quantity << "\"," << check.lhs.mean << ','
        << check.lhs.se << ',' << check.lhs.n_samples << '\n';
    csv << '"' << check.rhs.quantity << "\"," << check.rhs.mean << ','
        << check.rhs.se << ',' << check.rhs.n_samples << '\n';
    emit(dec_common, doc, csv.str());
    return kExitOk;
  }

  if (ros_cmd->parsed()) {
    PolyMatrix f = load_polymatrix(ros_spec);
    if (f.degree() > 1)
      throw ValidationError("rosenthal: spec must be a degree-1 series");
    std::vector<Matrix> coeffs;
    for (int v = 1; v <= f.n(); ++v) {
      auto it = f.terms().find(VarSet{v});
      if (it != f.terms().end()) coeffs.push_back(it->second);
    }
    DistributionSpec dist = make_dist(ros_dist, ros_p);
    RosenthalCheck check;
    if (ros_use_L) {
      BoundOptions opts;
      opts.use_L_power = true;
      check.rhs = rosenthal_rhs(coeffs, dist, ros_t, opts);
      RosenthalCheck exact = rosenthal_empirical(coeffs, dist, ros_t,
                                                 ros_samples, ros_seed,
                                                 ros_common.threads);
      check.lhs = exact.lhs;
      double upper = check.lhs.mean + 4.0 * check.lhs.se;
      check.holds = upper <= 0.0 || std::log(upper) <= check.rhs.log_total;
    } else {
      check = rosenthal_empirical(coeffs, dist, ros_t, ros_samples, ros_seed,
                                  ros_common.threads);
    }
    json doc;
    doc["config"] = {{"command", "rosenthal"}, {"spec", ros_spec},
                     {"dist", dist_json(dist)}, {"t", ros_t},
                     {"samples", ros_samples}, {"seed", ros_seed},
                     {"use_L", ros_use_L}};
    doc["lhs"] = estimate_json(check.lhs);
    doc["rhs"] = check.rhs.to_json();
    doc["holds"] = check.holds;
    emit(ros_common, doc, check.rhs.to_csv());
    return kExitOk;
  }

  if (shape_cmd->parsed()) {
    Shape shape = load_shape(shape_path);
    BoundReport report = shape_bound(shape, shape_n, shape_p, shape_t, shape_C);
    json doc;
    doc["config"] = {{"command", "shape"}, {"shape", shape_path},
                     {"n", shape_n},       {"p", shape_p},
                     {"t", shape_t},       {"C", shape_C},
                     {"check", shape_check}, {"samples", shape_samples},
                     {"seed", shape_seed}};
    doc["report"] = report.to_json();
    doc["separator"] = {
        {"vertices", min_vertex_separator(shape).separator},
        {"size", min_vertex_separator(shape).size},
    };
    if (shape_check) {
      MomentEstimate mc = estimate_shape_moment(
          shape, shape_n, shape_p, MomentRequest{4 * shape_t, true, false},
          shape_samples, shape_seed, shape_common.threads);
      doc["empirical"] = estimate_json(mc);
      doc["dominates"] = dominates(report, mc);
    }
    if (shape_eps > 0.0) {
      ShapeTailBound tail = shape_tail_bound(shape, shape_n, shape_p, shape_eps, shape_C);
      doc["tail"] = {{"eps", shape_eps},
                     {"theta", tail.theta},
                     {"log_theta", tail.log_theta},
                     {"t", tail.t}};
    }
    emit(shape_common, doc, report.to_csv());
    return kExitOk;
  }

  if (melon_cmd->parsed()) {
    BoundReport report = melon_bound(melon_n, melon_t);
    json doc;
    doc["config"] = {{"command", "melon"},   {"n", melon_n},
                     {"t", melon_t},         {"check", melon_check},
                     {"samples", melon_samples}, {"seed", melon_seed}};
    doc["report"] = report.to_json();
    if (melon_check) {
      MomentEstimate mc = melon_moment(melon_n, melon_t, melon_samples,
                                       melon_seed, melon_common.threads);
      doc["empirical"] = estimate_json(mc);
      doc["dominates"] = dominates(report, mc);
    }
    emit(melon_common, doc, report.to_csv());
    return kExitOk;
  }

  if (suite_cmd->parsed()) {
    suite::SuiteOptions opts;
    opts.seed = suite_seed;
    opts.threads = suite_common.threads;
    suite::SuiteResult result = suite::run_full(opts);
    std::cout << suite::format_table(result);
    if (!suite_common.out_path.empty()) {
      std::ofstream out(suite_common.out_path, std::ios::binary);
      if (!out)
        throw ValidationError("cannot open output path: " + suite_common.out_path);
      out << result.report_json << "\n";
    }
    return result.all_pass() ? kExitOk : 1;
  }

  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run_cli(argc, argv);
  } catch (const ResourceError& e) {
    std::cerr << "resource error: " << e.what() << "\n";
    return kExitResource;
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const std::exception& e) {
    std::cerr << "unexpected error: " << e.what() << "\n";
    return 1;
  }
}
