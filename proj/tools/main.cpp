#include <CLI11.hpp>
#include <cstdio>
#include <string>

#include "sociotraffic/commands.hpp"
#include "sociotraffic/errors.hpp"

namespace st = sociotraffic;

namespace {

struct CommonArgs {
  std::string scenario_path;
  std::string out_dir;
  std::int64_t seed = -1;
};

void add_common(CLI::App* cmd, CommonArgs& args) {
  cmd->add_option("--scenario", args.scenario_path, "Scenario JSON file")->required();
  cmd->add_option("--out", args.out_dir, "Output directory (overrides the scenario's)");
  cmd->add_option("--seed", args.seed, "Seed override");
}

st::cli::CommandOptions make_options(const CommonArgs& args) {
  st::cli::CommandOptions opts;
  if (!args.out_dir.empty()) opts.out_dir = args.out_dir;
  if (args.seed >= 0) opts.seed = static_cast<std::uint64_t>(args.seed);
  return opts;
}

std::vector<double> parse_alpha_list(const std::string& sweep) {
  const std::string prefix = "alpha=";
  if (sweep.rfind(prefix, 0) != 0)
    throw st::ValidationError("--sweep: expected alpha=<comma-separated list>");
  std::vector<double> alphas;
  std::string rest = sweep.substr(prefix.size());
  std::size_t pos = 0;
  while (pos < rest.size()) {
    std::size_t comma = rest.find(',', pos);
    if (comma == std::string::npos) comma = rest.size();
    try {
      alphas.push_back(std::stod(rest.substr(pos, comma - pos)));
    } catch (const std::exception&) {
      throw st::ValidationError("--sweep: bad number in alpha list");
    }
    pos = comma + 1;
  }
  if (alphas.empty()) throw st::ValidationError("--sweep: empty alpha list");
  return alphas;
}

int run(int argc, char** argv) {
  CLI::App app{"Route-choice parameterized two-class macroscopic traffic pipeline"};
  app.require_subcommand(1);

  CommonArgs choice_args, analyze_args, simulate_args, fd_args;
  std::string sweep;
  std::vector<double> dhdx;

  auto* choice = app.add_subcommand("choice", "Run the route-choice model, write M1/M2/alpha");
  add_common(choice, choice_args);

  auto* analyze = app.add_subcommand("analyze", "Eigenvalues, hyperbolicity, boundary certificate");
  add_common(analyze, analyze_args);

  auto* simulate = app.add_subcommand("simulate", "Integrate the traffic system, write trajectories");
  add_common(simulate, simulate_args);
  simulate->add_option("--sweep", sweep, "alpha=<list>: one independent run per value");

  auto* fd = app.add_subcommand("fd", "Tabulate the fundamental diagram");
  add_common(fd, fd_args);
  fd->add_option("--dhdx", dhdx, "Cost-gradient slices (default -0.2 0 0.2)");

  CLI11_PARSE(app, argc, argv);

  if (choice->parsed()) {
    const auto scenario = st::cli::parse_scenario(choice_args.scenario_path);
    const auto result = st::cli::cmd_choice(scenario, make_options(choice_args));
    std::printf("choice: M1=%zu M2=%zu alpha=%.6g kappa=%.6g\n", result.outcome.m1,
                result.outcome.m2, result.outcome.alpha, result.outcome.kappa);
    std::printf("wrote %s\nwrote %s\n", result.vehicles_csv.c_str(), result.summary_csv.c_str());
    return static_cast<int>(st::ExitCode::ok);
  }

  if (analyze->parsed()) {
    const auto scenario = st::cli::parse_scenario(analyze_args.scenario_path);
    const auto result = st::cli::cmd_analyze(scenario, make_options(analyze_args));
    const auto& h = result.report.hyperbolicity;
    std::printf("analyze: alpha=%.6g margins=(%.6g, %.6g) hyperbolic=%s\n", result.alpha,
                h.margin1, h.margin2, h.hyperbolic ? "yes" : "no");
    std::printf("eigenvalues:");
    for (const auto& ev : result.report.spectrum.eigenvalues) {
      if (ev.imag() == 0.0)
        std::printf(" %.6g", ev.real());
      else
        std::printf(" %.6g%+.6gi", ev.real(), ev.imag());
    }
    std::printf("\nwrote %s\nwrote %s\n", result.report_txt.c_str(), result.report_csv.c_str());
    return static_cast<int>(h.hyperbolic ? st::ExitCode::ok : st::ExitCode::non_hyperbolic);
  }

  if (simulate->parsed()) {
    const auto scenario = st::cli::parse_scenario(simulate_args.scenario_path);
    auto opts = make_options(simulate_args);
    if (!sweep.empty()) opts.sweep_alphas = parse_alpha_list(sweep);
    const auto result = st::cli::cmd_simulate(scenario, opts);
    for (const auto& run : result.runs) {
      const auto& t = run.trajectory;
      const double ratio1 =
          t.norm_class1.front() > 0 ? t.norm_class1.back() / t.norm_class1.front() : 0.0;
      const double ratio2 =
          t.norm_class2.front() > 0 ? t.norm_class2.back() / t.norm_class2.front() : 0.0;
      std::printf("simulate: alpha=%.6g final/initial norms=(%.3g, %.3g)", run.alpha, ratio1,
                  ratio2);
      if (run.fit_class1 && run.fit_class2)
        std::printf(" epsilon=(%.4g, %.4g)", run.fit_class1->epsilon, run.fit_class2->epsilon);
      if (!t.lemma1_satisfied) std::printf(" [hyperbolicity conditions NOT satisfied]");
      std::printf("\nwrote %s\nwrote %s\n", run.states_csv.c_str(), run.norms_csv.c_str());
    }
    if (result.sweep_summary_csv) std::printf("wrote %s\n", result.sweep_summary_csv->c_str());
    return static_cast<int>(st::ExitCode::ok);
  }

  const auto scenario = st::cli::parse_scenario(fd_args.scenario_path);
  auto opts = make_options(fd_args);
  opts.dhdx = dhdx;
  const auto result = st::cli::cmd_fd(scenario, opts);
  std::printf("fd: %zu rows\nwrote %s\n", result.rows, result.csv.c_str());
  return static_cast<int>(st::ExitCode::ok);
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const st::ParseError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return static_cast<int>(st::ExitCode::parse_error);
  } catch (const st::DegenerateSplitError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return static_cast<int>(st::ExitCode::degenerate_split);
  } catch (const st::ValidationError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return static_cast<int>(st::ExitCode::validation_error);
  } catch (const st::CflError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return static_cast<int>(st::ExitCode::cfl_violation);
  } catch (const st::NonHyperbolicError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return static_cast<int>(st::ExitCode::non_hyperbolic);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return static_cast<int>(st::ExitCode::failure);
  }
}
