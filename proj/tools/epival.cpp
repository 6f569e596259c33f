// epival: function algebra, valuation evaluation, Hessian measures,
// homogeneous decomposition, and the property suites, over JSON inputs.
//
// Exit codes: 0 success, 2 I/O, 3 validation/usage, 4 suite failure,
// 5 numeric failure.

#include <cstdio>
#include <cstdlib>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "epival/acceptance.hpp"
#include "epival/decompose.hpp"
#include "epival/harness.hpp"
#include "epival/hessian.hpp"
#include "epival/json_io.hpp"
#include "epival/valuations.hpp"

namespace {

using namespace epival;

constexpr int kExitOk = 0;
constexpr int kExitIo = 2;
constexpr int kExitValidation = 3;
constexpr int kExitSuite = 4;
constexpr int kExitNumeric = 5;

int exit_code_for(const Error& e) {
  switch (e.code()) {
    case errc::io_failure:
      return kExitIo;
    case errc::invalid_argument:
    case errc::dimension_unsupported:
    case errc::dimension_mismatch:
    case errc::arity_mismatch:
    case errc::empty_input:
    case errc::unbounded_window:
      return kExitValidation;
    default:
      return kExitNumeric;
  }
}

std::vector<double> parse_doubles(const std::string& csv) {
  std::vector<double> out;
  std::size_t pos = 0;
  while (pos < csv.size()) {
    std::size_t next = csv.find(',', pos);
    if (next == std::string::npos) next = csv.size();
    out.push_back(std::stod(csv.substr(pos, next - pos)));
    pos = next + 1;
  }
  return out;
}

Vec parse_vec(const std::string& csv, int dim) {
  std::vector<double> vals = parse_doubles(csv);
  require(static_cast<int>(vals.size()) == dim, errc::invalid_argument,
          "expected " + std::to_string(dim) + " comma-separated coordinates");
  return {vals[0], dim == 2 ? vals[1] : 0.0};
}

std::vector<std::string> split(const std::string& csv, char sep = ',') {
  std::vector<std::string> out;
  std::size_t pos = 0;
  while (pos <= csv.size()) {
    std::size_t next = csv.find(sep, pos);
    if (next == std::string::npos) next = csv.size();
    out.push_back(csv.substr(pos, next - pos));
    pos = next + 1;
  }
  return out;
}

bool is_cell_pa_json(const json& j) { return j.contains("cells"); }

std::uint64_t default_seed() {
  if (const char* env = std::getenv("EPIVAL_SEED")) {
    return static_cast<std::uint64_t>(std::strtoull(env, nullptr, 10));
  }
  return 1;
}

// oracle spec strings: zeta:<path> | const:<value> | affine:<path>:<c0>:<cn>
ValuationOracle parse_oracle(const std::string& spec) {
  std::vector<std::string> parts = split(spec, ':');
  require(!parts.empty(), errc::invalid_argument, "empty oracle spec");
  if (parts[0] == "zeta") {
    require(parts.size() == 2, errc::invalid_argument, "oracle spec: zeta:<path>");
    return make_zeta_oracle(test_function_from_json(read_json_file(parts[1])));
  }
  if (parts[0] == "const") {
    require(parts.size() == 2, errc::invalid_argument, "oracle spec: const:<value>");
    return make_constant_oracle(std::stod(parts[1]));
  }
  if (parts[0] == "affine") {
    require(parts.size() == 4, errc::invalid_argument, "oracle spec: affine:<path>:<c0>:<cn>");
    ValuationOracle zeta = make_zeta_oracle(test_function_from_json(read_json_file(parts[1])));
    double c0 = std::stod(parts[2]), cn = std::stod(parts[3]);
    ValuationOracle out;
    out.eval = [zeta, c0, cn](const CellPA& u) { return c0 + cn * zeta(u); };
    out.meta = {true, true, std::nullopt};
    return out;
  }
  fail(errc::invalid_argument, "unknown oracle kind '" + parts[0] + "'");
}

SmoothGridFunction grid_from_json(const json& j) {
  int dim = j.at("dim").get<int>();
  Vec lo = vec_from_json(j.at("lo"), dim);
  Vec hi = vec_from_json(j.at("hi"), dim);
  double h = j.at("h").get<double>();
  std::string fn = j.value("fn", "");
  if (fn == "half_sq_norm") {
    return SmoothGridFunction::from_callable(dim, lo, hi, h,
                                             [](Vec p) { return 0.5 * norm2(p); });
  }
  if (fn == "quadratic") {
    const json& m = j.at("matrix");
    double a = m[0][0].get<double>();
    double b = dim == 2 ? m[0][1].get<double>() : 0.0;
    double c = dim == 2 ? m[1][1].get<double>() : 0.0;
    return SmoothGridFunction::from_callable(dim, lo, hi, h, [a, b, c](Vec p) {
      return 0.5 * (a * p.x * p.x + 2 * b * p.x * p.y + c * p.y * p.y);
    });
  }
  require(j.contains("values"), errc::invalid_argument,
          "grid: need fn = half_sq_norm|quadratic or a values array");
  SmoothGridFunction g = SmoothGridFunction::from_callable(dim, lo, hi, h, [](Vec) { return 0.0; });
  const json& vals = j.at("values");
  require(vals.size() == g.vals.size(), errc::invalid_argument, "grid: values size mismatch");
  for (std::size_t i = 0; i < g.vals.size(); ++i) g.vals[i] = vals[i].get<double>();
  return g;
}

void print_value(double v) { std::printf("%.17g\n", v); }

struct FnArgs {
  std::string in, in2, out;
  std::string weights = "1,1";
  std::string x;
  double lambda = 1.0;
  double t = 0.0;
};

int run_fn(const std::string& sub, const FnArgs& a) {
  if (sub == "conjugate") {
    json j = read_json_file(a.in);
    json result = is_cell_pa_json(j) ? to_json(conjugate(cell_pa_from_json(j)))
                                     : to_json(conjugate(max_affine_from_json(j)));
    write_json_file(a.out, result);
    return kExitOk;
  }
  if (sub == "infconv") {
    std::vector<CellPA> inputs;
    for (const std::string& path : split(a.in)) {
      inputs.push_back(cell_pa_from_json(read_json_file(path)));
    }
    write_json_file(a.out, to_json(inf_convolve(parse_doubles(a.weights), inputs)));
    return kExitOk;
  }
  if (sub == "scale") {
    json j = read_json_file(a.in);
    json result = is_cell_pa_json(j) ? to_json(epi_scale(cell_pa_from_json(j), a.lambda))
                                     : to_json(scale_values(max_affine_from_json(j), a.lambda));
    write_json_file(a.out, result);
    return kExitOk;
  }
  if (sub == "eval") {
    json j = read_json_file(a.in);
    if (is_cell_pa_json(j)) {
      CellPA u = cell_pa_from_json(j);
      print_value(u(parse_vec(a.x, u.dim)));
    } else {
      MaxAffine v = max_affine_from_json(j);
      print_value(v(parse_vec(a.x, v.dim)));
    }
    return kExitOk;
  }
  if (sub == "sublevel") {
    json j = read_json_file(a.in);
    Polyhedron p = is_cell_pa_json(j) ? sublevel_set(cell_pa_from_json(j), a.t)
                                      : sublevel_set(max_affine_from_json(j), a.t);
    write_json_file(a.out, to_json(p));
    return kExitOk;
  }
  fail(errc::invalid_argument, "unknown fn subcommand");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"piecewise-affine convex function calculus, valuations, Hessian measures"};
  app.require_subcommand(1);
  int workers = 0;
  app.add_option("--workers", workers, "worker count (default: hardware)");

  // fn
  FnArgs fn_args;
  CLI::App* fn = app.add_subcommand("fn", "function algebra");
  fn->require_subcommand(1);
  std::vector<std::pair<std::string, CLI::App*>> fn_subs;
  for (const char* name : {"conjugate", "infconv", "scale", "eval", "sublevel"}) {
    CLI::App* s = fn->add_subcommand(name);
    s->add_option("--in", fn_args.in)->required();
    if (std::string(name) != "eval") s->add_option("--out", fn_args.out)->required();
    if (std::string(name) == "infconv") s->add_option("--weights", fn_args.weights);
    if (std::string(name) == "scale") s->add_option("--lambda", fn_args.lambda)->required();
    if (std::string(name) == "eval") s->add_option("--x", fn_args.x)->required();
    if (std::string(name) == "sublevel") s->add_option("--t", fn_args.t)->required();
    fn_subs.push_back({name, s});
  }

  // val
  CLI::App* val = app.add_subcommand("val", "valuation evaluation");
  val->require_subcommand(1);
  std::string val_zeta, val_fn, val_y, val_body;
  CLI::App* val_eval = val->add_subcommand("eval", "Z_zeta on a cell PA function");
  val_eval->add_option("--zeta", val_zeta)->required();
  val_eval->add_option("--fn", val_fn)->required();
  CLI::App* val_dual = val->add_subcommand("dual-eval", "dual valuation on a max-affine function");
  val_dual->add_option("--zeta", val_zeta)->required();
  val_dual->add_option("--fn", val_fn)->required();
  CLI::App* val_body_cmd = val->add_subcommand("body", "Z(ell_y + I_K)");
  val_body_cmd->add_option("--zeta", val_zeta)->required();
  val_body_cmd->add_option("--y", val_y)->required();
  val_body_cmd->add_option("--body", val_body)->required();

  // hess
  CLI::App* hess = app.add_subcommand("hess", "Hessian measures");
  hess->require_subcommand(1);
  std::string hess_fn, hess_window, hess_s = "0.5,1,2", hess_csv, hess_grid, hess_zeta;
  std::uint64_t hess_samples = 1000000, hess_seed = default_seed();
  int hess_i = 0;
  std::string hess_slot = "x";
  CLI::App* hess_measure = hess->add_subcommand("measure", "Theta table on a window");
  hess_measure->add_option("--fn", hess_fn)->required();
  hess_measure->add_option("--window", hess_window)->required();
  hess_measure->add_option("--csv", hess_csv);
  CLI::App* hess_verify = hess->add_subcommand("verify-ps", "Monte-Carlo displacement check");
  hess_verify->add_option("--fn", hess_fn)->required();
  hess_verify->add_option("--window", hess_window)->required();
  hess_verify->add_option("--s", hess_s);
  hess_verify->add_option("--samples", hess_samples);
  hess_verify->add_option("--seed", hess_seed);
  hess_verify->add_option("--csv", hess_csv);
  CLI::App* hess_duality = hess->add_subcommand("duality", "Theta_i(v) vs Theta_{n-i}(v*)");
  hess_duality->add_option("--fn", hess_fn)->required();
  hess_duality->add_option("--window", hess_window)->required();
  CLI::App* hess_smooth = hess->add_subcommand("smooth", "quadrature of the smooth formula");
  hess_smooth->add_option("--grid", hess_grid)->required();
  hess_smooth->add_option("--i", hess_i)->required();
  hess_smooth->add_option("--zeta", hess_zeta)->required();
  hess_smooth->add_option("--zeta-slot", hess_slot)->check(CLI::IsMember({"x", "y"}));

  // decomp
  CLI::App* decomp = app.add_subcommand("decomp", "homogeneous decomposition");
  decomp->require_subcommand(1);
  std::string dec_oracle, dec_fn, dec_fns, dec_lambdas = "0.5,1,1.5,2", dec_out;
  int dec_n = 2, dec_m = 2;
  CLI::App* dec_run = decomp->add_subcommand("run", "components of a black-box oracle");
  dec_run->add_option("--oracle", dec_oracle)->required();
  dec_run->add_option("--fn", dec_fn)->required();
  dec_run->add_option("--n", dec_n)->required();
  dec_run->add_option("--out", dec_out);
  CLI::App* dec_polarize = decomp->add_subcommand("polarize", "signed subset polarization");
  dec_polarize->add_option("--oracle", dec_oracle)->required();
  dec_polarize->add_option("--fns", dec_fns)->required();
  CLI::App* dec_fit = decomp->add_subcommand("fit", "polynomial fit over a lambda grid");
  dec_fit->add_option("--oracle", dec_oracle)->required();
  dec_fit->add_option("--fns", dec_fns)->required();
  dec_fit->add_option("--lambdas", dec_lambdas);
  dec_fit->add_option("--m", dec_m)->required();
  dec_fit->add_option("--out", dec_out);

  // suite
  CLI::App* suite = app.add_subcommand("suite", "property suites");
  suite->require_subcommand(1);
  std::string suite_out, suite_zeta;
  std::uint64_t suite_seed = default_seed(), suite_cases = 100;
  int suite_dim = 2, suite_m = 3;
  bool negative_control = false;
  CLI::App* s_val = suite->add_subcommand("valuation", "valuation identity suite");
  CLI::App* s_incl = suite->add_subcommand("inclexcl", "inclusion-exclusion suite");
  CLI::App* s_cont = suite->add_subcommand("continuity", "continuity diagnostic");
  CLI::App* s_coer = suite->add_subcommand("coercive", "divergence demo on a cone");
  CLI::App* s_grow = suite->add_subcommand("growth", "counterexample growth sweep");
  for (CLI::App* s : {s_val, s_incl, s_cont, s_coer, s_grow}) {
    s->add_option("--seed", suite_seed);
    s->add_option("--cases", suite_cases);
    s->add_option("--out", suite_out);
    s->add_option("--dim", suite_dim)->check(CLI::IsMember({1, 2}));
    s->add_option("--zeta", suite_zeta, "test function JSON (default: built-in bump)");
  }
  s_val->add_flag("--negative-control", negative_control,
                  "run the squared-volume non-valuation; suite must fail");
  s_incl->add_option("--m", suite_m)->check(CLI::Range(2, 4));

  // repro
  CLI::App* repro = app.add_subcommand("repro", "re-run an acceptance criterion");
  int repro_id = 0;
  repro->add_option("id", repro_id, "criterion id (1..13)")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return e.get_exit_code() == 0 ? kExitOk : kExitValidation;
  }

  try {
    for (auto& [name, sub] : fn_subs) {
      if (sub->parsed()) return run_fn(name, fn_args);
    }

    if (val_eval->parsed()) {
      print_value(zeta_valuation(test_function_from_json(read_json_file(val_zeta)),
                                 cell_pa_from_json(read_json_file(val_fn))));
      return kExitOk;
    }
    if (val_dual->parsed()) {
      print_value(dual_zeta_valuation(test_function_from_json(read_json_file(val_zeta)),
                                      max_affine_from_json(read_json_file(val_fn)), true));
      return kExitOk;
    }
    if (val_body_cmd->parsed()) {
      TestFunction z = test_function_from_json(read_json_file(val_zeta));
      Polyhedron k = polyhedron_from_json(read_json_file(val_body));
      print_value(body_valuation(make_zeta_oracle(z), parse_vec(val_y, z.dim), k));
      return kExitOk;
    }

    if (hess_measure->parsed()) {
      CellPA u = cell_pa_from_json(read_json_file(hess_fn));
      Window w = window_from_json(read_json_file(hess_window));
      HessianMeasureTable t = hessian_measure(u, w);
      FILE* out = hess_csv.empty() ? stdout : std::fopen(hess_csv.c_str(), "w");
      require(out != nullptr, errc::io_failure, "cannot open " + hess_csv);
      std::fprintf(out, "i,theta\n");
      for (int i = 0; i <= u.dim; ++i) std::fprintf(out, "%d,%.17g\n", i, t[i]);
      if (out != stdout) std::fclose(out);
      return kExitOk;
    }
    if (hess_verify->parsed()) {
      CellPA u = cell_pa_from_json(read_json_file(hess_fn));
      Window w = window_from_json(read_json_file(hess_window));
      HessianMeasureTable t = hessian_measure(u, w);
      FILE* out = hess_csv.empty() ? stdout : std::fopen(hess_csv.c_str(), "w");
      require(out != nullptr, errc::io_failure, "cannot open " + hess_csv);
      std::fprintf(out, "s,mc_estimate,mc_stderr,polynomial,sigmas\n");
      bool ok = true;
      for (double s : parse_doubles(hess_s)) {
        McEstimate mc = ps_volume_mc(u, s, w, hess_samples, hess_seed, workers);
        double want = ps_poly(t, s);
        double sigmas = mc.stderr_ > 0 ? std::abs(mc.estimate - want) / mc.stderr_ : 0.0;
        ok = ok && sigmas <= 3.0;
        std::fprintf(out, "%.17g,%.17g,%.17g,%.17g,%.17g\n", s, mc.estimate, mc.stderr_, want,
                     sigmas);
      }
      if (out != stdout) std::fclose(out);
      return ok ? kExitOk : kExitSuite;
    }
    if (hess_duality->parsed()) {
      MaxAffine v = max_affine_from_json(read_json_file(hess_fn));
      Window w = window_from_json(read_json_file(hess_window));
      DualityReport rep = duality_check(v, w);
      std::printf("i,theta_fn,theta_conjugate\n");
      for (int i = 0; i <= v.dim; ++i) {
        std::printf("%d,%.17g,%.17g\n", i, rep.theta_fn[static_cast<std::size_t>(i)],
                    rep.theta_conjugate[static_cast<std::size_t>(i)]);
      }
      std::printf("max_discrepancy,%.17g\n", rep.max_discrepancy);
      return kExitOk;
    }
    if (hess_smooth->parsed()) {
      SmoothGridFunction g = grid_from_json(read_json_file(hess_grid));
      TestFunction z = test_function_from_json(read_json_file(hess_zeta));
      TestFunction3 z3;
      if (hess_slot == "x") {
        z3 = TestFunction3::x_only(z);
      } else {
        z3.y_slot = [z](Vec y) { return z(y); };
      }
      print_value(smooth_valuation_quad(z3, hess_i, g));
      return kExitOk;
    }

    if (dec_run->parsed()) {
      ValuationOracle oracle = parse_oracle(dec_oracle);
      CellPA u = cell_pa_from_json(read_json_file(dec_fn));
      std::vector<double> comps = homogeneous_components(oracle, u, dec_n);
      double direct = oracle(u);
      double recon = 0.0;
      for (double c : comps) recon += c;
      json out;
      out["components"] = comps;
      out["direct"] = direct;
      out["reconstruction_defect"] = std::abs(recon - direct);
      json defects = json::array();
      for (int i = 0; i <= dec_n; ++i) {
        defects.push_back(
            verify_homogeneity(component_oracle(oracle, dec_n, i), i, u, {0.5, 1.0, 2.0, 3.0}));
      }
      out["homogeneity_defects"] = defects;
      if (dec_out.empty()) {
        std::printf("%s\n", out.dump(2).c_str());
      } else {
        write_json_file(dec_out, out);
      }
      return kExitOk;
    }
    if (dec_polarize->parsed()) {
      ValuationOracle oracle = parse_oracle(dec_oracle);
      std::vector<CellPA> fns;
      for (const std::string& path : split(dec_fns)) {
        fns.push_back(cell_pa_from_json(read_json_file(path)));
      }
      print_value(polarize(oracle, fns));
      return kExitOk;
    }
    if (dec_fit->parsed()) {
      ValuationOracle oracle = parse_oracle(dec_oracle);
      std::vector<CellPA> fns;
      for (const std::string& path : split(dec_fns)) {
        fns.push_back(cell_pa_from_json(read_json_file(path)));
      }
      PolynomialFit fit = polynomial_fit(oracle, fns, parse_doubles(dec_lambdas), dec_m);
      MixedValuationTable table = mixed_valuations(fit);
      json out;
      out["residual"] = fit.residual;
      json coeffs = json::array();
      for (std::size_t t = 0; t < fit.exponents.size(); ++t) {
        coeffs.push_back({{"exponents", fit.exponents[t]}, {"coeff", fit.coeffs[t]}});
      }
      out["coefficients"] = coeffs;
      json mixed = json::array();
      for (std::size_t t = 0; t < table.exponents.size(); ++t) {
        mixed.push_back({{"exponents", table.exponents[t]}, {"value", table.values[t]}});
      }
      out["mixed_valuations"] = mixed;
      if (dec_out.empty()) {
        std::printf("%s\n", out.dump(2).c_str());
      } else {
        write_json_file(dec_out, out);
      }
      return kExitOk;
    }

    auto load_suite_zeta = [&](int dim) {
      if (!suite_zeta.empty()) return test_function_from_json(read_json_file(suite_zeta));
      return TestFunction::bump(dim, 4.0, 2, {{0, 0, 1.0}, {1, 0, 0.2}});
    };
    auto emit_report = [&](const SuiteReport& rep) {
      json j = to_json(rep);
      if (suite_out.empty()) {
        std::printf("%s\n", j.dump(2).c_str());
      } else {
        write_json_file(suite_out, j);
        std::printf("%s: %s (max defect %.3g over %llu cases)\n", rep.suite.c_str(),
                    rep.passed() ? "pass" : "FAIL", rep.max_defect,
                    static_cast<unsigned long long>(rep.cases));
      }
    };

    if (s_val->parsed()) {
      ValuationOracle oracle = negative_control
                                   ? squared_volume_oracle()
                                   : make_zeta_oracle(load_suite_zeta(suite_dim));
      SuiteReport rep =
          valuation_identity_suite(oracle, suite_cases, suite_seed, suite_dim, 1e-9, workers);
      emit_report(rep);
      bool ok = negative_control ? !rep.passed() : rep.passed();
      return ok ? kExitOk : kExitSuite;
    }
    if (s_incl->parsed()) {
      SuiteReport rep = inclusion_exclusion_suite(make_zeta_oracle(load_suite_zeta(suite_dim)),
                                                  suite_m, suite_cases, suite_seed, suite_dim,
                                                  1e-8, workers);
      emit_report(rep);
      return rep.passed() ? kExitOk : kExitSuite;
    }
    if (s_cont->parsed()) {
      double r = 1.6;
      TestFunction z = TestFunction::constant_bump(1, 2.0, 2, 1.0);
      double limit = 2.0 * (r - std::pow(r, 3) / 6.0 + std::pow(r, 5) / 80.0);
      ContinuityReport rep = continuity_suite(
          make_zeta_oracle(z), [](Vec p) { return 0.5 * p.x * p.x; },
          [](Vec p) { return Vec{p.x}; }, r, {4, 8, 16, 32, 64}, 1, limit);
      json j;
      j["probe_counts"] = rep.probe_counts;
      j["values"] = rep.values;
      j["limit"] = rep.limit;
      j["errors"] = rep.errors;
      j["monotone"] = rep.monotone;
      if (suite_out.empty()) {
        std::printf("%s\n", j.dump(2).c_str());
      } else {
        write_json_file(suite_out, j);
      }
      return rep.monotone && rep.errors.back() <= 0.01 * limit ? kExitOk : kExitSuite;
    }
    if (s_coer->parsed()) {
      TestFunction z = load_suite_zeta(2);
      DivergenceReport rep =
          coercive_divergence_demo(z, {1.0, 0.3}, {{1, 0}, {0.6, 0.8}}, {1, 2, 4, 8});
      std::printf("R,value,value_over_Rn\n");
      for (const DivergenceRow& row : rep.rows) {
        std::printf("%.17g,%.17g,%.17g\n", row.radius, row.value, row.value_over_rn);
      }
      std::printf("predicted_ratio,%.17g\n", rep.predicted_ratio);
      double gap = std::abs(rep.rows.back().value_over_rn - rep.predicted_ratio);
      return gap <= 0.01 * std::abs(rep.predicted_ratio) ? kExitOk : kExitSuite;
    }
    if (s_grow->parsed()) {
      TestFunction eta = TestFunction::constant_bump(2, 3.0, 1, 9.0 / 5.0);
      GrowthReport rep = growth_demo(eta, {0.5, 1.0, 1.5, 2.0, 2.5, 3.0}, 3.25, 1.0 / 64);
      std::printf("lambda,conjugate_sign_value,literal_value\n");
      for (std::size_t i = 0; i < rep.conjugate_sign.lambdas.size(); ++i) {
        std::printf("%.17g,%.17g,%.17g\n", rep.conjugate_sign.lambdas[i],
                    rep.conjugate_sign.values[i], rep.literal_sign.values[i]);
      }
      std::printf("c1_conjugate,%.17g\nc1_literal,%.17g\n", rep.conjugate_sign.c1,
                  rep.literal_sign.c1);
      return rep.conjugate_sign.c1 > 0.1 ? kExitOk : kExitSuite;
    }

    if (repro->parsed()) {
      acceptance::CriterionResult r = acceptance::run_criterion(repro_id, workers);
      std::printf("criterion %2d [%s]: %s  (%s)\n", r.id, r.name.c_str(),
                  r.pass ? "PASS" : "FAIL", r.details.c_str());
      return r.pass ? kExitOk : kExitSuite;
    }
  } catch (const Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return exit_code_for(e);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitNumeric;
  }
  return kExitValidation;
}
