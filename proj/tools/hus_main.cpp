#include "hus/report_io.hpp"

#include "CLI11.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

namespace {

constexpr int kOk = 0;
constexpr int kUsage = 1;
constexpr int kVerdict = 2;

bool parse_matrix(const std::string& text, hus::Mat2& m) {
  std::istringstream in(text);
  double v[4];
  for (double& x : v) {
    if (!(in >> x) || !std::isfinite(x)) return false;
  }
  std::string rest;
  if (in >> rest) return false;
  m << v[0], v[1], v[2], v[3];
  return true;
}

double clamped_horizon(const hus::EigenClass& ec, double horizon) {
  double rho = 0.0;
  if (const auto* d = std::get_if<hus::RealDistinct>(&ec)) {
    rho = std::max(std::abs(d->lambda1), std::abs(d->lambda2));
  } else if (const auto* r = std::get_if<hus::RealRepeated>(&ec)) {
    rho = std::abs(r->lambda);
  } else {
    rho = std::abs(std::get<hus::ComplexPair>(ec).alpha);
  }
  if (rho * horizon <= hus::kExpArgCap) return horizon;
  return hus::kExpArgCap / rho;
}

std::vector<hus::PerturbationSpec> build_specs(
    const std::vector<std::string>& families, double eps, double omega,
    double period, const hus::Vec2& dir) {
  std::vector<hus::PerturbationSpec> specs;
  for (const std::string& f : families) {
    if (f == "constant") {
      specs.push_back(hus::constant_dir(eps, dir));
    } else if (f == "sinusoid") {
      specs.push_back(hus::sinusoid(eps, omega, dir));
    } else if (f == "switch") {
      specs.push_back(hus::sign_switch(eps, period, dir));
    } else {
      throw CLI::ValidationError("--families",
                                 "unknown family '" + f + "'");
    }
  }
  return specs;
}

int run_analyze(const std::string& matrix_text, double tol) {
  hus::Mat2 m;
  if (!parse_matrix(matrix_text, m)) {
    std::cerr << "error: --matrix needs 4 finite reals (row-major)\n";
    return kUsage;
  }
  const hus::StabilityReport rep = hus::analyze(m, tol);
  std::cout << hus::to_json(rep) << "\n";
  return rep.stable ? kOk : kVerdict;
}

int run_verify(const std::string& matrix_text, double eps, double horizon,
               double step, const std::vector<std::string>& families,
               double omega, double period, const std::string& out_dir) {
  hus::Mat2 m;
  if (!parse_matrix(matrix_text, m)) {
    std::cerr << "error: --matrix needs 4 finite reals (row-major)\n";
    return kUsage;
  }
  const hus::StabilityReport rep = hus::analyze(m);
  if (!rep.stable) {
    std::cout << hus::to_json(rep) << "\n";
    return kVerdict;
  }
  const hus::Vec2 dir = hus::lower_bound(m).maximizer;
  const auto specs = build_specs(families, eps, omega, period, dir);
  const hus::CertificationSummary cert =
      hus::certify(m, specs, rep, horizon, step);
  if (!out_dir.empty()) {
    std::filesystem::create_directories(out_dir);
    const double h = clamped_horizon(rep.eigen, horizon);
    const auto grid = hus::symmetric_grid(h, step);
    for (const hus::PerturbationSpec& spec : specs) {
      const hus::TrajectoryRecord rec =
          hus::certified_record(m, rep, spec, hus::Vec2::Zero(), grid);
      std::ofstream os(std::filesystem::path(out_dir) /
                       (std::string("trajectory_") + hus::family_name(spec) +
                        ".csv"));
      hus::write_trajectory_csv(os, rec);
    }
  }
  std::cout << hus::to_json(rep, &cert) << "\n";
  return cert.all_pass ? kOk : kVerdict;
}

int run_witness(const std::string& kind, const std::string& matrix_text,
                double eps, double horizon, double step,
                const std::string& out_path) {
  hus::Mat2 m;
  if (!parse_matrix(matrix_text, m)) {
    std::cerr << "error: --matrix needs 4 finite reals (row-major)\n";
    return kUsage;
  }
  const hus::StabilityReport rep = hus::analyze(m);
  hus::TrajectoryRecord rec;
  if (kind == "lower-bound") {
    if (!rep.stable) {
      std::cerr << "error: lower-bound witness needs a Hyers-Ulam stable matrix\n";
      return kVerdict;
    }
    const hus::Vec2 e = hus::lower_bound(m).maximizer;
    const hus::LowerBoundWitness w = hus::lower_bound_witness(m, e, eps);
    const double h = clamped_horizon(rep.eigen, horizon);
    rec.times = hus::symmetric_grid(h, step);
    for (double t : rec.times) {
      rec.phi.push_back(w.phi(t));
      rec.x.push_back(w.x(t));
      rec.deviation.push_back(w.deviation_constant);
    }
    rec.sup_deviation = w.deviation_constant;
  } else {
    if (rep.stable) {
      std::cerr << "error: instability witness needs an unstable matrix\n";
      return kVerdict;
    }
    const hus::InstabilityWitness w(m, rep.eigen, eps);
    rec.times = hus::symmetric_grid(horizon, step);
    for (double t : rec.times) {
      const hus::Vec2 p = w.phi(t);
      rec.phi.push_back(p);
      rec.deviation.push_back(hus::vec_inf_norm(p));  // x columns zero-filled
      rec.sup_deviation = std::max(rec.sup_deviation, rec.deviation.back());
    }
  }
  std::ofstream os(out_path);
  if (!os) {
    std::cerr << "error: cannot open " << out_path << " for writing\n";
    return kUsage;
  }
  hus::write_trajectory_csv(os, rec);
  return kOk;
}

int run_second_order(bool has_real, double l1, double l2, bool has_complex,
                     double alpha, double beta, const std::string& subst) {
  hus::SecondOrderProblem problem;
  if (has_real == has_complex) {
    std::cerr << "error: give either --lambda1/--lambda2 or --alpha/--beta\n";
    return kUsage;
  }
  if (has_real) {
    problem.roots = hus::RealRoots{l1, l2};
  } else {
    problem.roots = hus::ComplexRoots{alpha, beta};
  }
  problem.substitution = subst == "triangular" ? hus::Substitution::Triangular
                                               : hus::Substitution::Direct;
  try {
    const hus::SecondOrderReport rep = hus::second_order_report(problem);
    std::cout << hus::to_json(rep) << "\n";
    return rep.report.stable ? kOk : kVerdict;
  } catch (const hus::IncompatibleSubstitutionError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Hyers-Ulam stability analysis of x' = Ax for real 2x2 A"};
  app.require_subcommand(1);

  std::string matrix_text;
  double tol = 1e-10;
  auto* analyze = app.add_subcommand(
      "analyze", "stability verdict, constants, lower bound");
  analyze->add_option("--matrix", matrix_text, "matrix \"a b c d\" (row-major)")
      ->required();
  analyze->add_option("--tol", tol, "classification tolerance");

  std::string v_matrix;
  double v_eps = 1.0, v_horizon = 50.0, v_step = 0.01, v_omega = 1.0,
         v_period = 1.0;
  std::vector<std::string> v_families = {"constant", "sinusoid", "switch"};
  std::string v_outdir;
  auto* verify = app.add_subcommand(
      "verify", "certify sup||phi - x|| <= K*eps for the closed-form families");
  verify->add_option("--matrix", v_matrix, "matrix \"a b c d\"")->required();
  verify->add_option("--eps", v_eps, "perturbation size");
  verify->add_option("--horizon", v_horizon, "time horizon");
  verify->add_option("--step", v_step, "grid step");
  verify->add_option("--families", v_families,
                     "subset of constant,sinusoid,switch")
      ->delimiter(',');
  verify->add_option("--omega", v_omega, "sinusoid frequency");
  verify->add_option("--period", v_period, "sign-switch period");
  verify->add_option("--out-dir", v_outdir, "write per-family trajectory CSVs");

  std::string w_kind, w_matrix, w_out;
  double w_eps = 1.0, w_horizon = 50.0, w_step = 0.01;
  auto* witness =
      app.add_subcommand("witness", "export a witness trajectory as CSV");
  witness->add_option("kind", w_kind, "lower-bound | instability")
      ->required()
      ->check(CLI::IsMember({"lower-bound", "instability"}));
  witness->add_option("--matrix", w_matrix, "matrix \"a b c d\"")->required();
  witness->add_option("--eps", w_eps, "perturbation size");
  witness->add_option("--horizon", w_horizon, "time horizon");
  witness->add_option("--step", w_step, "grid step");
  witness->add_option("--out", w_out, "output CSV path")->required();

  double s_l1 = 0.0, s_l2 = 0.0, s_alpha = 0.0, s_beta = 0.0;
  std::string s_subst = "direct";
  auto* second = app.add_subcommand(
      "second-order", "x'' - (l1+l2)x' + l1*l2*x = 0 via a 2x2 system");
  auto* o_l1 = second->add_option("--lambda1", s_l1, "first real root");
  auto* o_l2 = second->add_option("--lambda2", s_l2, "second real root");
  auto* o_alpha = second->add_option("--alpha", s_alpha, "complex root real part");
  auto* o_beta = second->add_option("--beta", s_beta, "complex root imag part");
  second->add_option("--substitution", s_subst, "direct | triangular")
      ->check(CLI::IsMember({"direct", "triangular"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  }

  try {
    if (app.got_subcommand(analyze)) return run_analyze(matrix_text, tol);
    if (app.got_subcommand(verify)) {
      return run_verify(v_matrix, v_eps, v_horizon, v_step, v_families, v_omega,
                        v_period, v_outdir);
    }
    if (app.got_subcommand(witness)) {
      return run_witness(w_kind, w_matrix, w_eps, w_horizon, w_step, w_out);
    }
    const bool has_real = o_l1->count() > 0 && o_l2->count() > 0;
    const bool has_complex = o_alpha->count() > 0 && o_beta->count() > 0;
    return run_second_order(has_real, s_l1, s_l2, has_complex, s_alpha, s_beta,
                            s_subst);
  } catch (const CLI::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const hus::NotStableError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kVerdict;
  } catch (const hus::IsStableError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kVerdict;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  }
}
