// Command-line front end: every command prints a JSON report and exits with
// 0 (all checks pass), 1 (some check failed) or 2 (bad input).
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "zpole/genus0.hpp"
#include "zpole/io.hpp"
#include "zpole/numerics.hpp"
#include "zpole/theta.hpp"
#include "zpole/verify.hpp"

namespace {

using nlohmann::json;
using namespace zpole;

constexpr int kExitPass = 0;
constexpr int kExitFail = 1;
constexpr int kExitInput = 2;

struct Globals {
  std::uint64_t seed = 7;
  int samples = 0;
  double tol_scale = 1.0;
  std::string out;
  std::string hash;  // of the argument list, echoed in reports
};

VerifyOptions options(const Globals& g) {
  if (g.tol_scale <= 0) throw Error(ErrorCode::InputError, "--tol-scale must be positive");
  if (g.samples < 0) throw Error(ErrorCode::InputError, "--samples must be nonnegative");
  return {g.seed, g.samples, g.tol_scale};
}

cplx parse_tau(const std::string& text) {
  const cplx tau = io::parse_complex(text);
  if (!(tau.imag() > 0)) throw Error(ErrorCode::InputError, "tau needs positive imaginary part");
  return tau;
}

// Complex list given as JSON ("[[1,0],[0,2]]") or comma separated literals.
std::vector<cplx> parse_complex_list(const std::string& text) {
  std::vector<cplx> out;
  if (!text.empty() && text.front() == '[') {
    json j;
    try {
      j = json::parse(text);
    } catch (const json::exception& e) {
      throw Error(ErrorCode::InputError, e.what());
    }
    const CVec v = io::vector_from(j);
    for (int k = 0; k < v.size(); ++k) out.push_back(v(k));
    return out;
  }
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(io::parse_complex(item));
  return out;
}

PeriodMatrix parse_omega(const std::string& text) {
  if (text.empty() || text.front() != '[') return PeriodMatrix::genus1(io::parse_complex(text));
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::InputError, e.what());
  }
  if (!j.is_array() || j.empty()) throw Error(ErrorCode::InputError, "omega must be a list of rows");
  const int g = static_cast<int>(j.size());
  CMat omega(g, g);
  for (int i = 0; i < g; ++i) {
    const CVec row = io::vector_from(j[i]);
    if (row.size() != g) throw Error(ErrorCode::InputError, "omega must be square");
    omega.row(i) = row.transpose();
  }
  return PeriodMatrix(omega);
}

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::InputError, "cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::InputError, path + ": " + e.what());
  }
}

std::string input_hash(int argc, char** argv) {
  std::string joined;
  for (int k = 1; k < argc; ++k) {
    joined += argv[k];
    joined.push_back('\0');
  }
  std::ostringstream hex;
  hex << std::hex << std::hash<std::string>{}(joined);
  return hex.str();
}

void emit(const Globals& g, const json& report) {
  const std::string text = report.dump(2);
  if (g.out.empty()) {
    std::cout << text << "\n";
    return;
  }
  std::ofstream f(g.out);
  if (!f) throw Error(ErrorCode::InputError, "cannot write " + g.out);
  f << text << "\n";
}

json with_options(json report, const std::string& command, const Globals& g) {
  report["command"] = command;
  report["seed"] = g.seed;
  report["samples"] = g.samples;
  report["tol_scale"] = g.tol_scale;
  report["input_hash"] = g.hash;
  return report;
}

int theta_command(const Globals& g, const std::string& omega_text, const std::string& z_text,
                  const std::string& a_text, const std::string& b_text, bool gradient) {
  const PeriodMatrix omega = parse_omega(omega_text);
  const int genus = omega.genus();
  const std::vector<cplx> zs = parse_complex_list(z_text);
  if (static_cast<int>(zs.size()) != genus) {
    throw Error(ErrorCode::InputError, "z needs " + std::to_string(genus) + " entries");
  }
  CVec z(genus);
  for (int k = 0; k < genus; ++k) z(k) = zs[k];
  Characteristic ch = Characteristic::zero(genus);
  auto real_list = [&](const std::string& text, RVec& dst) {
    if (text.empty()) return;
    const std::vector<cplx> vals = parse_complex_list(text);
    if (static_cast<int>(vals.size()) != genus) {
      throw Error(ErrorCode::InputError, "characteristic needs " + std::to_string(genus) + " entries");
    }
    for (int k = 0; k < genus; ++k) {
      if (vals[k].imag() != 0) throw Error(ErrorCode::InputError, "characteristic must be real");
      dst(k) = vals[k].real();
    }
  };
  real_list(a_text, ch.a);
  real_list(b_text, ch.b);
  const ThetaEngine engine(omega);
  const ThetaValue v = engine.value_and_gradient(ch, z);
  json report = {{"genus", genus},
                 {"z", io::vector_json(z)},
                 {"a", std::vector<double>(ch.a.data(), ch.a.data() + genus)},
                 {"b", std::vector<double>(ch.b.data(), ch.b.data() + genus)},
                 {"value", io::to_json(v.value)},
                 {"pass", true}};
  if (gradient) report["gradient"] = io::vector_json(v.gradient);
  emit(g, with_options(report, "theta", g));
  return kExitPass;
}

int solve_genus0_command(const Globals& g, const std::string& path) {
  const json input = read_json_file(path);
  const Genus0Problem problem = Genus0Problem::from_json(input);
  const Genus0Solution sol = solve_genus0(problem);
  const RationalMatrixFunction& t = sol.function;
  const int r = problem.rank;
  const double tol = 1e-10 * g.tol_scale;

  CriterionReport checks;
  double zero = 0, pole = 0, inverse = 0;
  for (const auto& z : problem.zeros) {
    const CMat value = t(z.point);
    const double scale = std::max(1.0, (value - CMat::Identity(r, r)).norm());
    zero = std::max(zero, (z.x * value).norm() / (z.x.norm() * scale));
  }
  for (const auto& p : problem.poles) {
    const CMat res = laurent_matrix([&](cplx w) { return t(w); }, p.point, 0.05).residue;
    pole = std::max(pole, span_gap(res, p.u));
  }
  json evaluations = json::array();
  std::vector<cplx> points;
  for (const auto& e : input.value("evaluate", json::array())) points.push_back(io::complex_from(e));
  for (cplx w : points) {
    json entry = {{"z", io::to_json(w)}};
    bool on_pole = false;
    for (const auto& p : problem.poles) on_pole = on_pole || std::abs(w - p.point) < 1e-12;
    bool on_zero = false;
    for (const auto& z : problem.zeros) on_zero = on_zero || std::abs(w - z.point) < 1e-12;
    if (!on_pole) entry["T"] = io::to_json(t(w));
    if (!on_zero) entry["T_inverse"] = io::to_json(t.inverse(w));
    if (!on_pole && !on_zero) {
      inverse = std::max(inverse, relative_residual(CMat(t(w) * t.inverse(w)), CMat::Identity(r, r)));
    }
    evaluations.push_back(entry);
  }
  checks.expect_below("zero_conditions", zero, tol, 1.0);
  checks.expect_below("pole_residue_span_gap", pole, tol, 1.0);
  checks.expect_below("T_times_inverse_minus_I", inverse, tol, 1.0);

  json coefficients = json::array();
  for (const CRow& c : t.coefficients()) coefficients.push_back(io::vector_json(c.transpose()));
  json report = to_json(checks);
  report.erase("criterion");
  report.erase("title");
  report["rank"] = r;
  report["gamma"] = io::to_json(sol.gamma);
  report["gamma_condition"] = sol.condition;
  report["coefficients"] = coefficients;
  report["evaluations"] = evaluations;
  emit(g, with_options(report, "solve-genus0", g));
  return checks.pass() ? kExitPass : kExitFail;
}

int report_command(const Globals& g, const std::string& name, const CriterionReport& rep) {
  emit(g, with_options(to_json(rep), name, g));
  return rep.pass() ? kExitPass : kExitFail;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Zero-pole interpolation on genus 0 and genus 1 surfaces"};
  app.require_subcommand(1);
  app.fallthrough();  // global flags may follow the subcommand
  Globals g;
  app.add_option("--seed", g.seed, "RNG seed for randomized sweeps")->capture_default_str();
  app.add_option("--samples", g.samples, "Sample count override (0: per-check default)");
  app.add_option("--tol-scale", g.tol_scale, "Multiplier applied to every tolerance")->capture_default_str();
  app.add_option("--out", g.out, "Report file (default stdout)");

  g.hash = input_hash(argc, argv);
  std::function<int()> action;

  std::string omega_text = "i", z_text = "0", a_text, b_text;
  bool gradient = false;
  auto* theta = app.add_subcommand("theta", "Evaluate theta, theta with characteristic, gradient");
  theta->add_option("--omega", omega_text, "tau, or period matrix as JSON rows of [re, im]");
  theta->add_option("--z", z_text, "argument, comma separated or JSON list");
  theta->add_option("--a", a_text, "characteristic a, comma separated");
  theta->add_option("--b", b_text, "characteristic b, comma separated");
  theta->add_flag("--gradient", gradient, "also report the gradient");
  theta->callback([&] { action = [&] { return theta_command(g, omega_text, z_text, a_text, b_text, gradient); }; });

  std::string problem_path;
  auto* genus0 = app.add_subcommand("solve-genus0", "Solve a rational interpolation problem file");
  genus0->add_option("problem", problem_path, "problem JSON")->required();
  genus0->callback([&] { action = [&] { return solve_genus0_command(g, problem_path); }; });

  std::string tau_text = "0.3+0.8i";
  int n = 2;
  int rank = 1;
  auto tau_option = [&](CLI::App* sub, const std::string& fallback) {
    sub->add_option("--tau", tau_text, "modulus in the upper half plane")->default_str(fallback);
  };

  auto* line = app.add_subcommand("solve-line", "Scalar torus problem: both forms and their agreement");
  tau_option(line, "0.3+0.8i");
  line->add_option("--n", n, "number of zeros (and poles)")->check(CLI::Range(1, 8));
  line->callback([&] { action = [&] { return report_command(g, "solve-line", line_sweep(parse_tau(tau_text), n, options(g))); }; });

  auto* fay = app.add_subcommand("fay-check", "Randomized three-term theta identity sweep");
  tau_option(fay, "0.3+0.8i");
  fay->callback([&] { action = [&] { return report_command(g, "fay-check", fay_sweep(parse_tau(tau_text), options(g))); }; });

  auto* mfay = app.add_subcommand("matrix-fay", "Matrix three-term identity sweep");
  tau_option(mfay, "0.3+0.8i");
  mfay->callback([&] { action = [&] { return report_command(g, "matrix-fay", matrix_fay_sweep(parse_tau(tau_text), options(g))); }; });

  auto* kernel = app.add_subcommand("kernel-check", "Residue, connection and collection invariants");
  tau_option(kernel, "0.3+0.8i");
  kernel->add_option("--rank", rank, "1 (line bundle) or more (direct sum)")->check(CLI::Range(1, 4));
  kernel->callback([&] { action = [&] { return report_command(g, "kernel-check", kernel_sweep(parse_tau(tau_text), rank, options(g))); }; });

  auto* detrep = app.add_subcommand("detrep", "Build the pencil and sweep identities and membership");
  tau_option(detrep, "0.3+0.8i");
  detrep->add_option("--rank", rank, "bundle rank")->check(CLI::Range(1, 4));
  detrep->callback([&] { action = [&] { return report_command(g, "detrep", detrep_sweep(parse_tau(tau_text), rank, options(g))); }; });

  auto* conint = app.add_subcommand("conint", "Concrete interpolation: solve, compare Gamma, intertwine");
  tau_option(conint, "0.3+0.8i");
  conint->callback([&] { action = [&] { return report_command(g, "conint", conint_run(parse_tau(tau_text), options(g))); }; });

  std::vector<int> only;
  auto* all = app.add_subcommand("verify-all", "Full acceptance suite");
  all->add_option("--criterion", only, "restrict to these criteria (1-9)")->check(CLI::Range(1, 9));
  all->callback([&] {
    action = [&] {
      const VerifyOptions opts = options(g);
      std::vector<CriterionReport> reports;
      if (only.empty()) {
        reports = verify_all(opts);
      } else {
        for (int id : only) reports.push_back(run_criterion(id, opts));
      }
      json list = json::array();
      bool pass = true;
      for (const auto& r : reports) {
        list.push_back(to_json(r));
        pass = pass && r.pass();
      }
      emit(g, with_options({{"pass", pass}, {"criteria", list}}, "verify-all", g));
      return pass ? kExitPass : kExitFail;
    };
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cout << json{{"pass", false}, {"error", "InputError"}, {"message", e.what()}}.dump(2) << "\n";
    return kExitInput;
  }

  try {
    return action();
  } catch (const Error& e) {
    std::cout << json{{"pass", false},
                      {"error", error_name(e.code())},
                      {"message", e.what()},
                      {"input_hash", g.hash}}
                     .dump(2)
              << "\n";
    return kExitInput;
  } catch (const std::exception& e) {
    std::cout << json{{"pass", false}, {"error", "InputError"}, {"message", e.what()}}.dump(2) << "\n";
    return kExitInput;
  }
}
