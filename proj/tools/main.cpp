// Command-line driver: every library computation behind one subcommand,
// CSV/JSON emission, and a reproducibility manifest next to each output file.

#include <cctype>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "anharmonic/airy.hpp"
#include "anharmonic/airy_operator.hpp"
#include "anharmonic/error.hpp"
#include "anharmonic/grid.hpp"
#include "anharmonic/io.hpp"
#include "anharmonic/multiplier.hpp"
#include "anharmonic/parallel.hpp"
#include "anharmonic/profile_lab.hpp"
#include "anharmonic/quadrature.hpp"
#include "anharmonic/spectrum.hpp"
#include "anharmonic/version.hpp"

namespace {

using namespace anharmonic;

struct usage_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// ---- value grammar ---------------------------------------------------------

// Numbers accept decimals, fractions ("4/3"), and "inf".
double parse_number(const std::string& token) {
  std::string s;
  for (char c : token)
    if (!std::isspace(static_cast<unsigned char>(c))) s += c;
  if (s.empty()) throw usage_error("empty numeric token");
  std::string low;
  for (char c : s) low += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  if (low == "inf" || low == "infinity") return infinite_p;
  const auto slash = s.find('/');
  try {
    if (slash != std::string::npos) {
      const double num = parse_double(s.substr(0, slash));
      const double den = parse_double(s.substr(slash + 1));
      if (den == 0.0) throw usage_error("zero denominator in '" + s + "'");
      return num / den;
    }
    return parse_double(s);
  } catch (const contract_error&) {
    throw usage_error("unparseable number '" + token + "'");
  }
}

std::vector<double> parse_list(const std::string& csv) {
  std::vector<double> out;
  std::stringstream ss(csv);
  std::string tok;
  while (std::getline(ss, tok, ',')) out.push_back(parse_number(tok));
  if (out.empty()) throw usage_error("empty list '" + csv + "'");
  return out;
}

// "LO:HI:STEP" inclusive of both ends (up to step rounding).
std::vector<double> parse_range(const std::string& spec) {
  std::stringstream ss(spec);
  std::string a, b, c;
  if (!std::getline(ss, a, ':') || !std::getline(ss, b, ':') ||
      !std::getline(ss, c, ':'))
    throw usage_error("range must be LO:HI:STEP, got '" + spec + "'");
  const double lo = parse_number(a), hi = parse_number(b), step = parse_number(c);
  if (!(step > 0.0) || hi < lo)
    throw usage_error("range needs HI >= LO and STEP > 0: '" + spec + "'");
  std::vector<double> out;
  const int n = static_cast<int>(std::floor((hi - lo) / step + 1e-9));
  for (int i = 0; i <= n; ++i) out.push_back(lo + i * step);
  return out;
}

Grid parse_grid(const std::string& spec) {
  std::stringstream ss(spec);
  std::string a, b, c;
  if (!std::getline(ss, a, ':') || !std::getline(ss, b, ':') ||
      !std::getline(ss, c, ':'))
    throw usage_error("grid must be LO:HI:N, got '" + spec + "'");
  const double lo = parse_number(a), hi = parse_number(b);
  const double nd = parse_number(c);
  const int n = static_cast<int>(std::lround(nd));
  if (nd != n || n < 2) throw usage_error("grid N must be an integer >= 2");
  try {
    return Grid(lo, hi, n);
  } catch (const contract_error& e) {
    throw usage_error(std::string("bad grid: ") + e.what());
  }
}

GridFunction read_input_function(const std::string& path) {
  std::ifstream is(path);
  require(is.good(), "invalid grid function", "cannot open '" + path + "'");
  return read_grid_function_csv(is);
}

// ---- output plumbing --------------------------------------------------------

std::string iso_utc_now() {
  std::time_t t = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

struct Emitter {
  std::string out_path;  // empty: stdout
  RunManifest manifest;

  void add_param(const std::string& k, const std::string& v) {
    manifest.parameters.emplace_back(k, v);
  }
  void add_param(const std::string& k, double v) {
    add_param(k, format_double(v));
  }

  // Writes content; alongside a file, also <path>.manifest.json.
  void emit(const std::string& content, const std::string& path_override = "") {
    const std::string path = path_override.empty() ? out_path : path_override;
    if (path.empty()) {
      std::fputs(content.c_str(), stdout);
      return;
    }
    std::ofstream os(path, std::ios::binary);
    require(os.good(), "invalid grid function", "cannot open '" + path + "'");
    os << content;
    std::ofstream ms(path + ".manifest.json", std::ios::binary);
    require(ms.good(), "invalid grid function",
            "cannot open '" + path + ".manifest.json'");
    ms << manifest_to_json(manifest).dump(2) << '\n';
  }
};

std::string grid_function_payload(const GridFunction& f, const std::string& fmt) {
  std::ostringstream os;
  if (fmt == "json") {
    nlohmann::json x = nlohmann::json::array(), re = nlohmann::json::array(),
                   im = nlohmann::json::array();
    for (int i = 0; i < f.grid.n_points; ++i) {
      x.push_back(f.grid.x(i));
      re.push_back(f.values[i].real());
      im.push_back(f.values[i].imag());
    }
    os << nlohmann::json{{"x", x}, {"re", re}, {"im", im}}.dump(2) << '\n';
  } else {
    write_grid_function_csv(os, f);
  }
  return os.str();
}

// ---- verify suites -----------------------------------------------------------

struct VerifyRow {
  std::string check;
  double measured = 0.0;
  bool has_bound = false;
  double bound = 0.0;
  bool pass = true;
};

VerifyRow check_row(std::string name, double measured, double bound, bool pass) {
  return {std::move(name), measured, true, bound, pass};
}

VerifyRow info_row(std::string name, double measured) {
  return {std::move(name), measured, false, 0.0, true};
}

std::vector<VerifyRow> suite_gaps(int count) {
  SpectralBasis basis = build_basis(static_cast<std::size_t>(count) + 1);
  double min_lower = infinite_p, min_upper = infinite_p;
  for (int n = 0; n < count; ++n) {
    const double a = basis.modes[n].lambda, b = basis.modes[n + 1].lambda;
    const double gap = b - a;
    min_lower = std::min(min_lower, gap - 0.5 * std::numbers::pi / std::sqrt(b));
    min_upper = std::min(min_upper, 0.5 * std::numbers::pi / std::sqrt(a) - gap);
  }
  return {check_row("gap_lower_min_slack", min_lower, -1e-9, min_lower >= -1e-9),
          check_row("gap_upper_min_slack", min_upper, -1e-9, min_upper >= -1e-9)};
}

std::vector<VerifyRow> suite_asymptotics(int count) {
  require(count >= 150, "basis too small", "asymptotics suite needs count >= 150");
  SpectralBasis basis = build_basis(static_cast<std::size_t>(count));
  double worst = 0.0;
  for (int n = 100; n <= count; ++n) {
    const double ref = std::pow(0.75 * std::numbers::pi * n, 2.0 / 3.0);
    worst = std::max(worst, std::abs(basis.modes[n - 1].lambda / ref - 1.0));
  }
  // Deviation decays like n^{-2}; window maxima must fall monotonically.
  const int windows = 8;
  const int width = (count - 100) / windows;
  double prev = infinite_p;
  int violations = 0;
  for (int w = 0; w < windows; ++w) {
    const int lo = 100 + w * width;
    const int hi = (w == windows - 1) ? count : lo + width;
    double wmax = 0.0;
    for (int n = lo; n < hi; ++n) {
      const double ref = std::pow(0.75 * std::numbers::pi * n, 2.0 / 3.0);
      wmax = std::max(wmax, std::abs(basis.modes[n - 1].lambda / ref - 1.0));
    }
    if (wmax > prev) ++violations;
    prev = wmax;
  }
  return {check_row("asymptote_max_deviation", worst, 0.02, worst <= 0.02),
          check_row("deviation_trend_violations", violations, 0.0,
                    violations == 0)};
}

std::vector<VerifyRow> suite_ortho(int count) {
  SpectralBasis basis = build_basis(static_cast<std::size_t>(count));
  const double lam_max = basis.modes.back().lambda;
  const double hi = lam_max + 16.0;
  const QuadratureRule rule = oscillatory_rule(0.0, hi, 2.0 * std::sqrt(lam_max) + 1.0);
  double worst = 0.0;
  for (int i = 0; i < count; ++i)
    for (int j = i; j < count; ++j) {
      const EigenMode &mi = basis.modes[i], &mj = basis.modes[j];
      double g = 0.0;
      if (mi.parity == mj.parity)
        g = 2.0 * integrate_real(
                      [&](double x) {
                        return eigenfunction_eval(mi, x) * eigenfunction_eval(mj, x);
                      },
                      0.0, hi, rule);
      const double target = i == j ? 1.0 : 0.0;
      worst = std::max(worst, std::abs(g - target));
    }
  return {check_row("gram_max_error", worst, 1e-8, worst <= 1e-8)};
}

// Uniform draw in [lo, hi] from explicit 53-bit mantissas, so streams are
// identical across standard library implementations.
double draw_uniform(std::mt19937_64& rng, double lo, double hi) {
  const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
  return lo + (hi - lo) * u;
}

std::vector<VerifyRow> suite_plancherel(std::uint64_t seed, int pairs) {
  std::mt19937_64 rng(seed);
  std::vector<VerifyRow> rows;
  bool all = true;
  for (int k = 0; k < pairs; ++k) {
    const double x = draw_uniform(rng, -6.0, 4.0);
    const double a = draw_uniform(rng, 8.0, 25.0);
    MultiplierProfile F = bump_profile(a, 2.0 * a);
    PlancherelRowResult r = kernel_row_plancherel(F, x);
    const double rel = std::abs(r.row_side - r.profile_side) /
                       std::max(r.profile_side, 1e-300);
    rows.push_back(check_row("plancherel_rel_err_pair" + std::to_string(k + 1),
                             rel, 1e-6, rel <= 1e-6));
    all = all && rel <= 1e-6;
  }
  (void)all;
  return rows;
}

std::vector<VerifyRow> suite_propagation(double lambda_scale, double y) {
  MultiplierProfile F = bump_profile(0.5, 1.0);
  const Grid grid(-0.5 * lambda_scale, lambda_scale,
                  static_cast<int>(std::lround(1.5 * lambda_scale)) * 4 + 1);
  std::vector<VerifyRow> rows;
  const double gap = verify_finite_propagation(F, lambda_scale, y, grid);
  rows.push_back(check_row("default_bandwidth_gap", gap, 1e-3, gap <= 1e-3));
  // Dyadic bandwidth ladder crossing the propagation threshold from above:
  // oversized bandwidths let the wave reach the kink, and the gap collapses
  // once the band drops below it.
  const double h0 = std::pow(lambda_scale, 1.5) / 6.0;
  double prev = infinite_p;
  int violations = 0;
  for (double mult : {8.0, 4.0, 2.0}) {
    const double g = verify_finite_propagation(F, lambda_scale, y, grid, mult * h0);
    rows.push_back(info_row("ladder_gap_bw_x" + format_double(mult), g));
    if (g >= prev) ++violations;
    prev = g;
  }
  rows.push_back(check_row("ladder_trend_violations", violations, 0.0,
                           violations == 0));
  return rows;
}

std::vector<VerifyRow> suite_i4res() {
  MultiplierProfile F = bump_profile(0.5, 1.0);
  const std::vector<double> ladder = {16.0, 32.0, 64.0, 128.0};
  SpectralBasis basis = build_basis_to_cutoff(9.0 / 8.0 * ladder.back() + 1.0);
  std::vector<VerifyRow> rows;
  std::vector<double> ratios;
  for (double ls : ladder) {
    std::vector<double> ys;
    for (int i = 0; i <= 64; ++i)
      ys.push_back(-0.25 * ls + 0.5 * ls * i / 64.0);
    const double v = kernel_row_L2_bound(basis, F, ls, ys).value;
    ratios.push_back(v);
    rows.push_back(info_row("i4res_ratio_lambda" + format_double(ls), v));
  }
  const double slope = detail::log_log_slope(ladder, ratios);
  rows.push_back(check_row("i4res_log_slope", slope, 0.05, slope <= 0.05));
  return rows;
}

std::vector<VerifyRow> suite_kernel_bounds() {
  const Grid grid(-40.0, 40.0, 401);
  std::vector<VerifyRow> rows;
  double cmin = infinite_p, cmax = 0.0;
  bool violations_ok = true;
  for (double a : {4.0, 8.0})
    for (double y : {30.0, 60.0}) {
      MultiplierProfile w = bump_profile(-a, a);
      KernelBoundReport r = verify_kernel_bound(w, y, 4, grid);
      rows.push_back(info_row("fitted_C_a" + format_double(a) + "_y" +
                                  format_double(y),
                              r.fitted_C));
      rows.push_back(check_row("violation_ratio_a" + format_double(a) + "_y" +
                                   format_double(y),
                               r.max_violation_ratio, 1.0,
                               r.max_violation_ratio <= 1.0));
      violations_ok = violations_ok && r.max_violation_ratio <= 1.0;
      cmin = std::min(cmin, r.fitted_C);
      cmax = std::max(cmax, r.fitted_C);
    }
  const double spread = cmax / std::max(cmin, 1e-300);
  rows.push_back(check_row("fitted_C_spread", spread, 4.0, spread <= 4.0));
  return rows;
}

std::string verify_payload(const std::vector<VerifyRow>& rows,
                           const std::string& fmt) {
  std::ostringstream os;
  if (fmt == "json") {
    nlohmann::json arr = nlohmann::json::array();
    for (const VerifyRow& r : rows) {
      nlohmann::json row = {{"check", r.check},
                            {"measured", r.measured},
                            {"pass", r.pass}};
      row["bound"] = r.has_bound ? nlohmann::json(r.bound) : nlohmann::json();
      arr.push_back(row);
    }
    os << arr.dump(2) << '\n';
  } else {
    os << "check,measured,bound,pass\n";
    for (const VerifyRow& r : rows)
      os << r.check << ',' << format_double(r.measured) << ','
         << (r.has_bound ? format_double(r.bound) : std::string()) << ','
         << (r.pass ? "true" : "false") << '\n';
  }
  return os.str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Spectral calculus for the anharmonic oscillator L = -d2/dx2 + |x| and "
      "the Airy operator A = -d2/dx2 + x"};
  app.require_subcommand(1);
  app.set_version_flag("--version", version_string);

  std::string out_path, format = "csv";
  int threads = 0;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--format", format, "Output format")
        ->check(CLI::IsMember({"csv", "json"}))
        ->capture_default_str();
    sub->add_option("--out", out_path, "Write output to a file (with manifest)");
    sub->add_option("--threads", threads, "Worker threads (0 = hardware)")
        ->envname("ANHARMONIC_THREADS")
        ->check(CLI::NonNegativeNumber);
  };

  // eig
  int eig_count = 0;
  double eig_cutoff = 0.0;
  CLI::App* eig = app.add_subcommand(
      "eig", "Eigenvalues, parities and normalization constants");
  eig->add_option("--count", eig_count, "Number of modes")
      ->check(CLI::PositiveNumber);
  eig->add_option("--cutoff", eig_cutoff, "Smallest spectral cutoff to cover")
      ->check(CLI::PositiveNumber);
  add_common(eig);

  // eval
  std::size_t eval_n = 0;
  std::string eval_grid;
  CLI::App* eval = app.add_subcommand("eval", "Sample one eigenfunction");
  eval->add_option("--n", eval_n, "Mode index (1-based)")
      ->required()
      ->check(CLI::PositiveNumber);
  eval->add_option("--grid", eval_grid, "Sample grid LO:HI:N")->required();
  add_common(eval);

  // apply
  std::string apply_in;
  double apply_alpha = 1.0, apply_R = 0.0, apply_cutoff = 0.0;
  CLI::App* apply = app.add_subcommand(
      "apply", "Apply a Riesz mean (1 - lambda/R)^alpha of L to a CSV function");
  apply->add_option("--in", apply_in, "Input GridFunction CSV")->required();
  apply->add_option("--R", apply_R, "Riesz threshold")
      ->required()
      ->check(CLI::PositiveNumber);
  apply->add_option("--alpha", apply_alpha, "Riesz order")
      ->capture_default_str()
      ->check(CLI::NonNegativeNumber);
  apply->add_option("--cutoff", apply_cutoff,
                    "Basis cutoff (default: R, the smallest that works)");
  add_common(apply);

  // kernel
  std::string kernel_op = "L", kernel_grid;
  double kernel_y = 0.0, kernel_R = 0.0, kernel_alpha = 1.0, kernel_ls = 0.0;
  bool kernel_y_set = false;
  CLI::App* kernel = app.add_subcommand(
      "kernel", "One multiplier kernel row: L via --R/--alpha (Riesz), A via "
                "--lambda-scale (smooth bump on [L/2, L])");
  kernel->add_option("--op", kernel_op, "Operator")
      ->check(CLI::IsMember({"L", "A"}))
      ->capture_default_str();
  kernel->add_option("--y", kernel_y, "Row point")
      ->required()
      ->each([&](const std::string&) { kernel_y_set = true; });
  kernel->add_option("--grid", kernel_grid, "Column grid LO:HI:N")->required();
  kernel->add_option("--R", kernel_R, "Riesz threshold (op L)");
  kernel->add_option("--alpha", kernel_alpha, "Riesz order (op L)")
      ->capture_default_str();
  kernel->add_option("--lambda-scale", kernel_ls, "Bump scale (op A)");
  add_common(kernel);

  // transform
  std::string tr_in, tr_grid;
  bool tr_inverse = false;
  CLI::App* transform = app.add_subcommand(
      "transform", "Airy transform of a CSV function onto --grid "
                   "(--inverse maps a spectral-side input back)");
  transform->add_option("--in", tr_in, "Input GridFunction CSV")->required();
  transform->add_option("--grid", tr_grid, "Target grid LO:HI:N")->required();
  transform->add_flag("--inverse", tr_inverse, "Invert instead of transform");
  add_common(transform);

  // scan
  std::string scan_p = "1,4/3,2,4", scan_alpha = "0:0.5:0.05",
              scan_ladder = "8,16,32,64,128";
  double scan_cutoff = 160.0, scan_div = 0.02, scan_conv = 0.01;
  CLI::App* scan = app.add_subcommand(
      "scan", "Convergence/divergence profile over the (1/p, alpha) plane");
  scan->add_option("--p-grid", scan_p, "Exponents p (fractions ok)")
      ->capture_default_str();
  scan->add_option("--alpha-grid", scan_alpha, "Alpha range LO:HI:STEP")
      ->capture_default_str();
  scan->add_option("--r-ladder", scan_ladder, "Dyadic R ladder")
      ->capture_default_str();
  scan->add_option("--cutoff", scan_cutoff, "Basis cutoff")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  scan->add_option("--divergent-slope", scan_div,
                   "Slope at or above which a point is divergent")
      ->capture_default_str();
  scan->add_option("--convergent-slope", scan_conv,
                   "Slope at or below which a point is convergent")
      ->capture_default_str();
  add_common(scan);

  // verify
  std::string verify_suite;
  int verify_count = 0;
  std::uint64_t verify_seed = 1234;
  double verify_ls = 40.0, verify_y = 15.0;
  CLI::App* verify = app.add_subcommand("verify", "Named verification suites");
  verify
      ->add_option("suite", verify_suite,
                   "One of: gaps, asymptotics, ortho, plancherel, propagation, "
                   "i4res, kernel-bounds")
      ->required()
      ->check(CLI::IsMember({"gaps", "asymptotics", "ortho", "plancherel",
                             "propagation", "i4res", "kernel-bounds"}));
  verify->add_option("--count", verify_count,
                     "Pairs/modes to verify (suite-dependent default)");
  verify->add_option("--seed", verify_seed, "Seed for randomized suites")
      ->capture_default_str();
  verify->add_option("--lambda-scale", verify_ls, "Propagation lambda scale")
      ->capture_default_str();
  verify->add_option("--y", verify_y, "Propagation observation point")
      ->capture_default_str();
  add_common(verify);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  configured_threads() = threads;

  std::string command_line;
  for (int i = 0; i < argc; ++i) {
    if (i) command_line += ' ';
    command_line += argv[i];
  }

  Emitter em;
  em.out_path = out_path;
  em.manifest.command_line = command_line;
  em.manifest.timestamp = iso_utc_now();
  em.add_param("format", format);
  em.add_param("threads", format_double(threads));

  try {
    if (eig->parsed()) {
      if (eig_count > 0 && eig_cutoff > 0.0)
        throw usage_error("eig takes --count or --cutoff, not both");
      if (eig_count == 0 && eig_cutoff == 0.0) eig_count = 32;
      SpectralBasis basis = eig_count > 0
                                ? build_basis(static_cast<std::size_t>(eig_count))
                                : build_basis_to_cutoff(eig_cutoff);
      if (eig_count > 0)
        em.add_param("count", format_double(eig_count));
      else
        em.add_param("cutoff", eig_cutoff);
      std::ostringstream os;
      if (format == "json")
        os << basis_to_json(basis).dump(2) << '\n';
      else
        write_basis_csv(os, basis);
      em.emit(os.str());
    } else if (eval->parsed()) {
      const Grid grid = parse_grid(eval_grid);
      SpectralBasis basis = build_basis(eval_n);
      const EigenMode& mode = basis.modes[eval_n - 1];
      GridFunction f = sample(grid, [&](double x) {
        return complex(eigenfunction_eval(mode, x), 0.0);
      });
      em.add_param("n", format_double(static_cast<double>(eval_n)));
      em.add_param("grid", eval_grid);
      em.emit(grid_function_payload(f, format));
    } else if (apply->parsed()) {
      GridFunction f = read_input_function(apply_in);
      const double cutoff = apply_cutoff > 0.0 ? apply_cutoff : apply_R;
      SpectralBasis basis = build_basis_to_cutoff(cutoff);
      GridFunction out =
          apply_multiplier(basis, riesz_profile({apply_alpha, apply_R}), f);
      em.add_param("in", apply_in);
      em.add_param("R", apply_R);
      em.add_param("alpha", apply_alpha);
      em.add_param("cutoff", cutoff);
      em.emit(grid_function_payload(out, format));
    } else if (kernel->parsed()) {
      (void)kernel_y_set;
      const Grid grid = parse_grid(kernel_grid);
      GridFunction row;
      if (kernel_op == "L") {
        if (kernel_R <= 0.0) throw usage_error("kernel --op L needs --R > 0");
        SpectralBasis basis = build_basis_to_cutoff(kernel_R);
        row = multiplier_kernel_row(basis, riesz_profile({kernel_alpha, kernel_R}),
                                    kernel_y, grid);
        em.add_param("R", kernel_R);
        em.add_param("alpha", kernel_alpha);
      } else {
        if (kernel_ls <= 0.0)
          throw usage_error("kernel --op A needs --lambda-scale > 0");
        MultiplierProfile F = bump_profile(0.5 * kernel_ls, kernel_ls);
        row = airy_multiplier_kernel_row(F, kernel_y, grid);
        em.add_param("lambda-scale", kernel_ls);
      }
      em.add_param("op", kernel_op);
      em.add_param("y", kernel_y);
      em.add_param("grid", kernel_grid);
      em.emit(grid_function_payload(row, format));
    } else if (transform->parsed()) {
      GridFunction f = read_input_function(tr_in);
      const Grid target = parse_grid(tr_grid);
      GridFunction out;
      if (tr_inverse) {
        AiryTransformPlan plan = make_transform_plan(target, f.grid);
        out = airy_inverse_transform(plan, f);
      } else {
        AiryTransformPlan plan = make_transform_plan(f.grid, target);
        out = airy_transform(plan, f);
      }
      em.add_param("in", tr_in);
      em.add_param("grid", tr_grid);
      em.add_param("inverse", tr_inverse ? "true" : "false");
      em.emit(grid_function_payload(out, format));
    } else if (scan->parsed()) {
      std::vector<double> ps = parse_list(scan_p);
      std::vector<double> inv_p;
      for (double p : ps) {
        if (!is_infinite_p(p) && p < 1.0)
          throw usage_error("scan exponents need p >= 1");
        inv_p.push_back(is_infinite_p(p) ? 0.0 : 1.0 / p);
      }
      const std::vector<double> alphas = parse_range(scan_alpha);
      const std::vector<double> ladder = parse_list(scan_ladder);
      SpectralBasis basis = build_basis_to_cutoff(scan_cutoff);
      std::vector<ProfilePoint> pts =
          profile_scan(basis, inv_p, alphas, ladder, scan_div, scan_conv);
      em.add_param("p-grid", scan_p);
      em.add_param("alpha-grid", scan_alpha);
      em.add_param("r-ladder", scan_ladder);
      em.add_param("cutoff", scan_cutoff);
      em.add_param("divergent-slope", scan_div);
      em.add_param("convergent-slope", scan_conv);
      std::ostringstream os;
      if (format == "json") {
        nlohmann::json arr = nlohmann::json::array();
        for (const ProfilePoint& pt : pts)
          arr.push_back({{"inv_p", pt.inv_p},
                         {"alpha", pt.alpha},
                         {"slope", pt.fitted_slope},
                         {"classification", classification_name(pt.classification)}});
        os << arr.dump(2) << '\n';
      } else {
        write_scan_csv(os, pts);
      }
      em.emit(os.str());
      if (!out_path.empty()) {
        std::ostringstream rs;
        write_region_csv(rs, inv_p);
        em.emit(rs.str(), out_path + ".region.csv");
      }
    } else if (verify->parsed()) {
      std::vector<VerifyRow> rows;
      if (verify_suite == "gaps") {
        const int count = verify_count > 0 ? verify_count : 500;
        em.add_param("count", format_double(count));
        rows = suite_gaps(count);
      } else if (verify_suite == "asymptotics") {
        const int count = verify_count > 0 ? verify_count : 500;
        em.add_param("count", format_double(count));
        rows = suite_asymptotics(count);
      } else if (verify_suite == "ortho") {
        const int count = verify_count > 0 ? verify_count : 30;
        em.add_param("count", format_double(count));
        rows = suite_ortho(count);
      } else if (verify_suite == "plancherel") {
        const int count = verify_count > 0 ? verify_count : 5;
        em.add_param("count", format_double(count));
        em.add_param("seed", format_double(static_cast<double>(verify_seed)));
        rows = suite_plancherel(verify_seed, count);
      } else if (verify_suite == "propagation") {
        em.add_param("lambda-scale", verify_ls);
        em.add_param("y", verify_y);
        rows = suite_propagation(verify_ls, verify_y);
      } else if (verify_suite == "i4res") {
        rows = suite_i4res();
      } else {
        rows = suite_kernel_bounds();
      }
      em.add_param("suite", verify_suite);
      em.emit(verify_payload(rows, format));
      for (const VerifyRow& r : rows)
        if (!r.pass) return 1;
    }
  } catch (const usage_error& e) {
    std::fprintf(stderr, "usage error: %s\n", e.what());
    return 2;
  } catch (const contract_error& e) {
    nlohmann::json err = {{"error", e.tag()}, {"detail", e.what()}};
    std::fprintf(stdout, "%s\n", err.dump().c_str());
    return 1;
  }
  return 0;
}
