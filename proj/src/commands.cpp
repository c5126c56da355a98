#include "sociotraffic/commands.hpp"

#include <cstdio>
#include <fstream>

#include "sociotraffic/errors.hpp"

namespace sociotraffic::cli {

namespace {

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

std::string alpha_tag(double alpha) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6g", alpha);
  return buf;
}

std::ofstream open_csv(const std::filesystem::path& p) {
  std::filesystem::create_directories(p.parent_path());
  std::ofstream out(p, std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open output file: " + p.string());
  return out;
}

std::filesystem::path out_dir(const Scenario& sc, const CommandOptions& opts) {
  return opts.out_dir ? std::filesystem::path(*opts.out_dir) : std::filesystem::path(sc.outputs);
}

Scenario with_overrides(Scenario sc, const CommandOptions& opts) {
  if (opts.seed) {
    sc.seed = *opts.seed;
    if (sc.social) sc.social->rng_seed = *opts.seed;
  }
  return sc;
}

}  // namespace

ChoiceResult cmd_choice(const Scenario& scenario_in, const CommandOptions& opts) {
  const Scenario scenario = with_overrides(scenario_in, opts);
  if (!scenario.social)
    throw ValidationError("choice: scenario has no social section (alpha was given directly)");

  std::vector<route_choice::VehicleChoice> details;
  details.reserve(scenario.social->num_vehicles);
  const auto outcome = route_choice::choose_routes(*scenario.social, &details);

  const auto dir = out_dir(scenario, opts);
  ChoiceResult result;
  result.outcome = outcome;
  result.vehicles_csv = dir / (scenario.name + "_choice_vehicles.csv");
  result.summary_csv = dir / (scenario.name + "_choice_summary.csv");

  auto vf = open_csv(result.vehicles_csv);
  vf << "vehicle,value1,value2,p1,p2,route\n";
  for (std::size_t k = 0; k < details.size(); ++k) {
    const auto& d = details[k];
    vf << k << ',' << num(d.value1) << ',' << num(d.value2) << ',' << num(d.p1) << ','
       << num(d.p2) << ',' << d.route << '\n';
  }

  auto sf = open_csv(result.summary_csv);
  sf << "m1,m2,alpha,kappa\n";
  sf << outcome.m1 << ',' << outcome.m2 << ',' << num(outcome.alpha) << ',' << num(outcome.kappa)
     << '\n';
  return result;
}

namespace {

void write_report_txt(std::ostream& out, const analysis::StabilityReport& r) {
  out << "stability report\n";
  out << "  alpha: " << num(r.alpha) << "\n";
  out << "  operating point: rho1=" << num(r.op.rho1) << " u1=" << num(r.op.u1)
      << " rho2=" << num(r.op.rho2) << " u2=" << num(r.op.u2) << "\n";
  out << "  jacobian:\n";
  for (int i = 0; i < 4; ++i) {
    out << "   ";
    for (int j = 0; j < 4; ++j) out << ' ' << num(r.jacobian(i, j));
    out << "\n";
  }
  out << "  eigenvalues:";
  for (const auto& ev : r.spectrum.eigenvalues) {
    out << ' ' << num(ev.real());
    if (ev.imag() != 0.0) out << (ev.imag() > 0 ? "+" : "") << num(ev.imag()) << "i";
  }
  out << "\n  real and distinct: " << (r.spectrum.real_and_distinct ? "yes" : "no") << "\n";
  out << "  hyperbolicity margins: " << num(r.hyperbolicity.margin1) << ", "
      << num(r.hyperbolicity.margin2) << " (discriminants " << num(r.hyperbolicity.delta1)
      << ", " << num(r.hyperbolicity.delta2) << ")\n";
  out << "  strictly hyperbolic: " << (r.hyperbolicity.hyperbolic ? "yes" : "no") << "\n";

  const auto& c = r.certificate;
  out << "  boundary certificate:\n";
  if (c.mu_found)
    out << "    first mu with positive definite form: " << num(*c.mu_found) << "\n";
  else
    out << "    no mu in the grid makes the form positive definite\n";
  out << "    scriptJ positive definite (symmetric part): " << (c.positive_definite ? "yes" : "no")
      << "\n";
  out << "    scriptJ eigenvalues all negative: " << (c.also_negative_definite ? "yes" : "no")
      << "\n";
  if (r.decay_class1)
    out << "  fitted decay class 1: epsilon=" << num(r.decay_class1->epsilon)
        << " prefactor=" << num(r.decay_class1->prefactor)
        << " r2=" << num(r.decay_class1->r_squared) << "\n";
  if (r.decay_class2)
    out << "  fitted decay class 2: epsilon=" << num(r.decay_class2->epsilon)
        << " prefactor=" << num(r.decay_class2->prefactor)
        << " r2=" << num(r.decay_class2->r_squared) << "\n";
}

const analysis::MuEntry* reporting_entry(const analysis::LyapunovCertificate& c) {
  if (c.table.empty()) return nullptr;
  if (!c.mu_found) return &c.table.front();
  for (const auto& e : c.table)
    if (e.mu == *c.mu_found) return &e;
  return &c.table.front();
}

}  // namespace

AnalyzeResult cmd_analyze(const Scenario& scenario_in, const CommandOptions& opts) {
  const Scenario scenario = with_overrides(scenario_in, opts);
  const double alpha = resolve_alpha(scenario);

  const auto mu_grid = analysis::default_mu_grid();
  AnalyzeResult result;
  result.alpha = alpha;
  result.report = analysis::build_report(scenario.op, alpha, scenario.solver_config.g_b,
                                         scenario.domain_start, scenario.domain_end, mu_grid);

  const auto dir = out_dir(scenario, opts);
  result.report_txt = dir / (scenario.name + "_stability.txt");
  result.report_csv = dir / (scenario.name + "_stability.csv");

  auto tf = open_csv(result.report_txt);
  write_report_txt(tf, result.report);

  auto cf = open_csv(result.report_csv);
  cf << "alpha,lambda1_re,lambda1_im,lambda2_re,lambda2_im,lambda3_re,lambda3_im,"
        "lambda4_re,lambda4_im,real_distinct,margin1,margin2,delta1,delta2,hyperbolic,"
        "mu_found,scriptJ_pd,minus_scriptJ_pd,scriptJ_eigs_negative\n";
  const auto& r = result.report;
  cf << num(alpha);
  for (const auto& ev : r.spectrum.eigenvalues) cf << ',' << num(ev.real()) << ',' << num(ev.imag());
  cf << ',' << (r.spectrum.real_and_distinct ? 1 : 0) << ',' << num(r.hyperbolicity.margin1)
     << ',' << num(r.hyperbolicity.margin2) << ',' << num(r.hyperbolicity.delta1) << ','
     << num(r.hyperbolicity.delta2) << ',' << (r.hyperbolicity.hyperbolic ? 1 : 0);
  const auto* entry = reporting_entry(r.certificate);
  cf << ',' << (r.certificate.mu_found ? num(*r.certificate.mu_found) : std::string(""));
  cf << ',' << (r.certificate.positive_definite ? 1 : 0) << ','
     << (entry && entry->minus_positive_definite ? 1 : 0) << ','
     << (r.certificate.also_negative_definite ? 1 : 0) << '\n';
  return result;
}

SimulateResult cmd_simulate(const Scenario& scenario_in, const CommandOptions& opts) {
  const Scenario scenario = with_overrides(scenario_in, opts);
  std::vector<double> alphas = opts.sweep_alphas;
  if (alphas.empty()) alphas.push_back(resolve_alpha(scenario));
  for (double a : alphas)
    if (!(a > 0.0 && a < 1.0)) throw ValidationError("sweep: alpha must lie in (0,1)");

  const auto dir = out_dir(scenario, opts);
  SimulateResult result;
  for (double alpha : alphas) {
    SimulationRun run;
    run.alpha = alpha;
    run.trajectory = solver::run_simulation(scenario.solver_config, scenario.make_model_params(alpha));

    const auto& traj = run.trajectory;
    const std::string stem = scenario.name + "_alpha" + alpha_tag(alpha);
    run.states_csv = dir / (stem + "_states.csv");
    run.norms_csv = dir / (stem + "_norms.csv");

    auto sf = open_csv(run.states_csv);
    sf << "t,x,rho1,u1,rho2,u2\n";
    for (std::size_t ti = 0; ti < traj.times.size(); ++ti) {
      const auto& st = traj.states[ti];
      for (std::size_t i = 0; i < st.grid.n; ++i) {
        sf << num(traj.times[ti]) << ',' << num(st.grid.point(i)) << ',' << num(st.rho1[i])
           << ',' << num(st.u1[i]) << ',' << num(st.rho2[i]) << ',' << num(st.u2[i]) << '\n';
      }
    }

    auto nf = open_csv(run.norms_csv);
    nf << "t,norm_class1,norm_class2\n";
    for (std::size_t ti = 0; ti < traj.times.size(); ++ti)
      nf << num(traj.times[ti]) << ',' << num(traj.norm_class1[ti]) << ','
         << num(traj.norm_class2[ti]) << '\n';

    // Decay fits are best-effort: zero-perturbation runs have all-zero norms
    // and nothing to fit.
    try {
      run.fit_class1 = analysis::fit_decay(traj.times, traj.norm_class1);
    } catch (const ValidationError&) {
    }
    try {
      run.fit_class2 = analysis::fit_decay(traj.times, traj.norm_class2);
    } catch (const ValidationError&) {
    }
    result.runs.push_back(std::move(run));
  }

  if (result.runs.size() > 1) {
    const auto path = dir / (scenario.name + "_sweep_summary.csv");
    auto f = open_csv(path);
    f << "alpha,epsilon_class1,epsilon_class2,final_over_initial1,final_over_initial2\n";
    for (const auto& run : result.runs) {
      const auto& t = run.trajectory;
      const double r1 = t.norm_class1.front() > 0 ? t.norm_class1.back() / t.norm_class1.front() : 0.0;
      const double r2 = t.norm_class2.front() > 0 ? t.norm_class2.back() / t.norm_class2.front() : 0.0;
      f << num(run.alpha) << ',' << (run.fit_class1 ? num(run.fit_class1->epsilon) : std::string(""))
        << ',' << (run.fit_class2 ? num(run.fit_class2->epsilon) : std::string("")) << ','
        << num(r1) << ',' << num(r2) << '\n';
    }
    result.sweep_summary_csv = path;
  }
  return result;
}

FdResult cmd_fd(const Scenario& scenario_in, const CommandOptions& opts) {
  const Scenario scenario = with_overrides(scenario_in, opts);
  std::vector<double> dhdx = opts.dhdx;
  if (dhdx.empty()) dhdx = {-0.2, 0.0, 0.2};

  double dmax = 1.0;
  for (double v : dhdx) dmax = std::max(dmax, 1.0 + v);
  std::vector<double> d_grid(101);
  for (std::size_t i = 0; i < d_grid.size(); ++i)
    d_grid[i] = dmax * static_cast<double>(i) / static_cast<double>(d_grid.size() - 1);

  const auto table = model::fundamental_diagram(dhdx, d_grid);

  FdResult result;
  result.csv = out_dir(scenario, opts) / (scenario.name + "_fd.csv");
  auto f = open_csv(result.csv);
  f << "dhdx,d,u\n";
  for (const auto& row : table)
    f << num(row.dhdx) << ',' << num(row.d) << ',' << num(row.u) << '\n';
  result.rows = table.size();
  return result;
}

}  // namespace sociotraffic::cli
