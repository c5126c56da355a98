#include "sociotraffic/solver.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include "sociotraffic/analysis.hpp"
#include "sociotraffic/errors.hpp"

namespace sociotraffic::solver {

using model::State4;
using model::TrafficState;

void SolverConfig::validate() const {
  std::vector<std::string> bad;
  if (cells < 16) bad.push_back("solver.cells: must be >= 16");
  if (!(cfl > 0.0 && cfl < 1.0)) bad.push_back("solver.cfl: must lie in (0,1)");
  if (!(t_end > 0.0)) bad.push_back("solver.t_end: must be positive");
  if (!(output_interval > 0.0)) bad.push_back("solver.output_interval: must be positive");
  if (!(perturbation.width > 0.0)) bad.push_back("solver.perturbation.width: must be positive");
  if (op.rho1 - std::abs(perturbation.amplitude[0]) <= 0.0)
    bad.push_back("solver.perturbation.amplitude[0]: rho1 must stay positive initially");
  if (op.rho2 - std::abs(perturbation.amplitude[2]) <= 0.0)
    bad.push_back("solver.perturbation.amplitude[2]: rho2 must stay positive initially");
  if (!bad.empty()) throw ValidationError(bad);
}

namespace {

double spectral_radius(const State4& s, bool route_region, double alpha) {
  const double c1 = route_region ? 1.0 : alpha;
  const double c2 = route_region ? 1.0 : 1.0 - alpha;
  double r = 0.0;
  for (int cls = 0; cls < 2; ++cls) {
    const double rho = cls == 0 ? s[0] : s[2];
    const double u = cls == 0 ? s[1] : s[3];
    const auto roots = analysis::quadratic_block_roots(rho, u, cls == 0 ? c1 : c2);
    r = std::max({r, std::abs(roots[0]), std::abs(roots[1])});
  }
  return r;
}

State4 ghost_from(const Eigen::Matrix4d& g, const State4& trace, const model::OperatingPoint& op) {
  const State4 base = op.as_state();
  State4 ghost;
  for (int r = 0; r < 4; ++r) {
    double dev = 0.0;
    for (int c = 0; c < 4; ++c) dev += g(r, c) * (trace[c] - base[c]);
    ghost[r] = base[r] + dev;
  }
  return ghost;
}

State4 llf_face(const State4& left, const State4& right, double c1, double c2, double a) {
  const State4 fl = model::region_flux(left, c1, c2);
  const State4 fr = model::region_flux(right, c1, c2);
  State4 f;
  for (int k = 0; k < 4; ++k) f[k] = 0.5 * (fl[k] + fr[k]) - 0.5 * a * (right[k] - left[k]);
  return f;
}

void require_finite(const TrafficState& s) {
  for (std::size_t i = 0; i < s.grid.n; ++i) {
    if (!std::isfinite(s.rho1[i]) || !std::isfinite(s.u1[i]) || !std::isfinite(s.rho2[i]) ||
        !std::isfinite(s.u2[i]))
      throw std::runtime_error("solver: non-finite state encountered");
  }
}

void check_cfl(double dt, double dx, double smax, double cfl) {
  if (smax <= 0.0) return;  // nothing propagates
  const double limit = cfl * dx / smax;
  if (dt > limit * (1.0 + 1e-9))
    throw CflError("solver: dt " + std::to_string(dt) + " violates CFL limit " +
                   std::to_string(limit));
}

}  // namespace

BoundaryGhosts apply_boundary(const TrafficState& state, const Eigen::Matrix4d& g_b,
                              const Eigen::Matrix4d& g_c, const model::OperatingPoint& op,
                              std::size_t junction_cells) {
  BoundaryGhosts ghosts;
  ghosts.main_downstream = ghost_from(g_b, state.cell(0), op);
  if (junction_cells < state.grid.n)
    ghosts.route_downstream = ghost_from(g_c, state.cell(junction_cells), op);
  return ghosts;
}

JunctionCoupling junction_flux(const State4& left, const State4& right, double alpha) {
  const double incoming = alpha * left[0] * left[1] + (1.0 - alpha) * left[2] * left[3];
  const double out1 = right[0] * right[1];
  const double out2 = right[2] * right[3];
  const double outgoing = out1 + out2;

  JunctionCoupling jc;
  jc.residual_pre = incoming - outgoing;
  if (std::abs(outgoing) < 1e-300) {
    if (std::abs(incoming) > 1e-14)
      throw JunctionBlockedError("junction_flux: incoming flux with zero outgoing capacity");
    jc.flux1 = 0.0;
    jc.flux2 = 0.0;
    jc.residual_post = incoming;
    return jc;
  }
  const double scale = incoming / outgoing;
  jc.flux1 = scale * out1;
  jc.flux2 = scale * out2;
  jc.residual_post = incoming - (jc.flux1 + jc.flux2);
  return jc;
}

double max_wave_speed(const TrafficState& state, double alpha, std::size_t junction_cells) {
  double smax = 0.0;
  for (std::size_t i = 0; i < state.grid.n; ++i)
    smax = std::max(smax, spectral_radius(state.cell(i), i >= junction_cells, alpha));
  return smax;
}

TrafficState step_nonlinear(const TrafficState& state, double dt, double alpha,
                            const StepContext& ctx, StepStats* stats) {
  require_finite(state);
  const std::size_t n = state.grid.n;
  const std::size_t m = std::min(ctx.junction_cells, n);
  const double dx = state.grid.dx();

  check_cfl(dt, dx, max_wave_speed(state, alpha, m), ctx.cfl);

  const BoundaryGhosts ghosts = apply_boundary(state, ctx.g_b, ctx.g_c, ctx.op, m);
  const bool has_route = m < n;

  // Face fluxes; faces[i] sits between cell i-1 and cell i. At the junction
  // the downstream side carries its own (RH-corrected) flux, so the face is
  // split into a main-side and a route-side value.
  std::vector<State4> faces(n + 1);
  State4 junction_route_face{};

  const auto coeff1 = [&](bool route) { return route ? 1.0 : alpha; };
  const auto coeff2 = [&](bool route) { return route ? 1.0 : 1.0 - alpha; };

  // Left domain edge: free outflow (ghost = first cell), which collapses the
  // LLF average to the plain flux.
  faces[0] = ctx.zero_flux_boundaries ? State4{} : model::region_flux(state.cell(0), alpha, 1.0 - alpha);

  for (std::size_t f = 1; f < n; ++f) {
    if (has_route && f == m) continue;  // junction face handled below
    // Faces below the junction separate main cells, faces above it route
    // cells; both neighbors always share the region here.
    const bool in_route = f > m;
    const State4 left = state.cell(f - 1);
    const State4 right = state.cell(f);
    const double a = std::max(spectral_radius(left, in_route, alpha),
                              spectral_radius(right, in_route, alpha));
    faces[f] = llf_face(left, right, coeff1(in_route), coeff2(in_route), a);
  }

  // Right edge of the domain: last segment's downstream ghost.
  {
    const bool in_route = has_route;
    const State4 ghost = in_route ? *ghosts.route_downstream : ghosts.main_downstream;
    const State4 last = state.cell(n - 1);
    const double a = std::max(spectral_radius(last, in_route, alpha),
                              spectral_radius(ghost, in_route, alpha));
    faces[n] = ctx.zero_flux_boundaries ? State4{}
                                        : llf_face(last, ghost, coeff1(in_route), coeff2(in_route), a);
  }

  if (has_route) {
    // Main side of the junction: boundary condition eta(B-) = G_B eta(A+).
    const State4 left = state.cell(m - 1);
    const double a_main =
        std::max(spectral_radius(left, false, alpha),
                 spectral_radius(ghosts.main_downstream, false, alpha));
    faces[m] = llf_face(left, ghosts.main_downstream, alpha, 1.0 - alpha, a_main);

    // Route side: Rankine-Hugoniot corrected mass fluxes; velocity components
    // from an LLF face in route coefficients.
    const State4 right = state.cell(m);
    const JunctionCoupling jc = junction_flux(left, right, alpha);
    if (stats) {
      stats->junction_residual_pre = std::max(stats->junction_residual_pre, std::abs(jc.residual_pre));
      stats->junction_residual_post =
          std::max(stats->junction_residual_post, std::abs(jc.residual_post));
    }
    const double a_route =
        std::max(spectral_radius(left, true, alpha), spectral_radius(right, true, alpha));
    junction_route_face = llf_face(left, right, 1.0, 1.0, a_route);
    junction_route_face[0] = jc.flux1;
    junction_route_face[2] = jc.flux2;
  }

  TrafficState next(state.grid);
  const double lam = dt / dx;
  int floored = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const State4 fl = (has_route && i == m) ? junction_route_face : faces[i];
    const State4& fr = faces[i + 1];
    State4 s = state.cell(i);
    for (int k = 0; k < 4; ++k) s[k] -= lam * (fr[k] - fl[k]);
    for (int k : {0, 2}) {
      if (s[k] < 0.0) {
        s[k] = 0.0;
        ++floored;
      }
    }
    next.set_cell(i, s);
  }
  if (stats) stats->floored += floored;
  return next;
}

namespace {

struct BlockDecomposition {
  double lambda_slow = 0.0;  // |slow| <= |fast|
  double lambda_fast = 0.0;
  // Rows of R^{-1} and columns of R for the 2x2 block.
  double r[2][2];     // eigenvector matrix
  double rinv[2][2];  // inverse
};

BlockDecomposition decompose_block(const Eigen::Matrix2d& blk) {
  const double tr = blk.trace();
  const double det = blk.determinant();
  const double disc = tr * tr - 4.0 * det;
  if (!(disc > 0.0))
    throw NonHyperbolicError("step_linearized: block eigenvalues not real and distinct");
  const double s = std::sqrt(disc);
  const double l1 = 0.5 * (tr - s);
  const double l2 = 0.5 * (tr + s);

  BlockDecomposition d;
  d.lambda_slow = l1;
  d.lambda_fast = l2;
  const double b = blk(0, 1);
  if (std::abs(b) > 1e-14) {
    d.r[0][0] = b;
    d.r[1][0] = l1 - blk(0, 0);
    d.r[0][1] = b;
    d.r[1][1] = l2 - blk(0, 0);
  } else {
    d.r[0][0] = l1 - blk(1, 1);
    d.r[1][0] = blk(1, 0);
    d.r[0][1] = l2 - blk(1, 1);
    d.r[1][1] = blk(1, 0);
  }
  const double detr = d.r[0][0] * d.r[1][1] - d.r[0][1] * d.r[1][0];
  if (std::abs(detr) < 1e-300)
    throw NonHyperbolicError("step_linearized: defective eigenvector matrix");
  d.rinv[0][0] = d.r[1][1] / detr;
  d.rinv[0][1] = -d.r[0][1] / detr;
  d.rinv[1][0] = -d.r[1][0] / detr;
  d.rinv[1][1] = d.r[0][0] / detr;
  return d;
}

}  // namespace

TrafficState step_linearized(const TrafficState& state, double dt, const Eigen::Matrix4d& jac,
                             const StepContext& ctx) {
  require_finite(state);
  const std::size_t n = state.grid.n;
  if (ctx.junction_cells < n)
    throw ValidationError("step_linearized: route segments are not supported by the frozen-Jacobian scheme");
  const double dx = state.grid.dx();

  const BlockDecomposition b1 = decompose_block(jac.block<2, 2>(0, 0));
  const BlockDecomposition b2 = decompose_block(jac.block<2, 2>(2, 2));
  const double smax = std::max({std::abs(b1.lambda_slow), std::abs(b1.lambda_fast),
                                std::abs(b2.lambda_slow), std::abs(b2.lambda_fast)});
  check_cfl(dt, dx, smax, ctx.cfl);

  const BoundaryGhosts ghosts = apply_boundary(state, ctx.g_b, ctx.g_c, ctx.op, n);
  const State4 base = ctx.op.as_state();

  // Characteristic variables per block: w = R^{-1} (eta - eta*).
  std::vector<double> w[4];
  for (auto& v : w) v.resize(n + 2);  // one ghost on each side
  const auto load = [&](std::size_t idx, const State4& s) {
    const double e0 = s[0] - base[0], e1 = s[1] - base[1];
    const double e2 = s[2] - base[2], e3 = s[3] - base[3];
    w[0][idx] = b1.rinv[0][0] * e0 + b1.rinv[0][1] * e1;
    w[1][idx] = b1.rinv[1][0] * e0 + b1.rinv[1][1] * e1;
    w[2][idx] = b2.rinv[0][0] * e2 + b2.rinv[0][1] * e3;
    w[3][idx] = b2.rinv[1][0] * e2 + b2.rinv[1][1] * e3;
  };
  for (std::size_t i = 0; i < n; ++i) load(i + 1, state.cell(i));
  load(0, state.cell(0));                 // upstream: zero-gradient outflow
  load(n + 1, ghosts.main_downstream);    // downstream: boundary data

  const double lambdas[4] = {b1.lambda_slow, b1.lambda_fast, b2.lambda_slow, b2.lambda_fast};
  std::vector<double> wn[4];
  for (int k = 0; k < 4; ++k) {
    wn[k].resize(n);
    const double lam = lambdas[k];
    const double nu = dt / dx * lam;
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t c = i + 1;
      // Upwind in the direction of propagation.
      const double grad = lam >= 0.0 ? (w[k][c] - w[k][c - 1]) : (w[k][c + 1] - w[k][c]);
      wn[k][i] = w[k][c] - nu * grad;
    }
  }

  TrafficState next(state.grid);
  for (std::size_t i = 0; i < n; ++i) {
    State4 s;
    s[0] = base[0] + b1.r[0][0] * wn[0][i] + b1.r[0][1] * wn[1][i];
    s[1] = base[1] + b1.r[1][0] * wn[0][i] + b1.r[1][1] * wn[1][i];
    s[2] = base[2] + b2.r[0][0] * wn[2][i] + b2.r[0][1] * wn[3][i];
    s[3] = base[3] + b2.r[1][0] * wn[2][i] + b2.r[1][1] * wn[3][i];
    next.set_cell(i, s);
  }
  return next;
}

std::pair<double, double> class_deviation_norms(const TrafficState& state,
                                                const model::OperatingPoint& op) {
  const double dx = state.grid.dx();
  double s1 = 0.0, s2 = 0.0;
  for (std::size_t i = 0; i < state.grid.n; ++i) {
    const double d0 = state.rho1[i] - op.rho1;
    const double d1 = state.u1[i] - op.u1;
    const double d2 = state.rho2[i] - op.rho2;
    const double d3 = state.u2[i] - op.u2;
    s1 += (d0 * d0 + d1 * d1) * dx;
    s2 += (d2 * d2 + d3 * d3) * dx;
  }
  return {std::sqrt(s1), std::sqrt(s2)};
}

TrafficState initial_state(const Grid1D& grid, const model::OperatingPoint& op,
                           const Perturbation& perturbation) {
  TrafficState state(grid);
  const State4 base = op.as_state();
  for (std::size_t i = 0; i < grid.n; ++i) {
    const double x = grid.point(i);
    double shape;
    if (perturbation.shape == PerturbationShape::gaussian_bump) {
      const double z = (x - perturbation.center) / perturbation.width;
      shape = std::exp(-0.5 * z * z);
    } else {
      shape = std::sin(2.0 * M_PI * (x - perturbation.center) / perturbation.width);
    }
    State4 s;
    for (int k = 0; k < 4; ++k) s[k] = base[k] + perturbation.amplitude[k] * shape;
    state.set_cell(i, s);
  }
  return state;
}

Trajectory run_simulation(const SolverConfig& config, const model::ModelParams& params) {
  config.validate();
  params.validate();

  const Grid1D grid{params.domain_start, params.domain_end, config.cells};
  const double dx = grid.dx();
  std::size_t m = 0;
  while (m < grid.n && grid.point(m) <= params.junction) ++m;

  if (config.scheme == Scheme::upwind_linearized && m < grid.n)
    throw ValidationError("solver.scheme: upwind-linearized requires junction == domain end");

  Trajectory traj;
  const auto hyp = analysis::check_hyperbolicity(config.op, params.alpha);
  traj.lemma1_satisfied = hyp.hyperbolic;
  if (!hyp.hyperbolic)
    std::fprintf(stderr,
                 "warning: operating point fails the strict-hyperbolicity conditions "
                 "(margins %.6g, %.6g); simulation may not decay\n",
                 hyp.margin1, hyp.margin2);

  StepContext ctx;
  ctx.junction_cells = m;
  ctx.op = config.op;
  ctx.g_b = config.g_b;
  ctx.g_c = config.g_c;
  ctx.cfl = config.cfl;

  const Eigen::Matrix4d jac = model::jacobian(config.op, params.alpha);

  TrafficState state = initial_state(grid, config.op, config.perturbation);

  const auto record = [&](double t) {
    traj.times.push_back(t);
    traj.states.push_back(state);
    const auto [n1, n2] = class_deviation_norms(state, config.op);
    traj.norm_class1.push_back(n1);
    traj.norm_class2.push_back(n2);
  };
  record(0.0);

  double t = 0.0;
  double next_output = config.output_interval;
  StepStats stats;
  while (t < config.t_end - 1e-12) {
    double smax;
    if (config.scheme == Scheme::local_lax_friedrichs) {
      smax = max_wave_speed(state, params.alpha, m);
    } else {
      const auto spec = analysis::block_eigenvalues(config.op, params.alpha);
      smax = 0.0;
      for (const auto& ev : spec.eigenvalues) smax = std::max(smax, std::abs(ev));
    }
    double dt = smax > 0.0 ? config.cfl * dx / smax : config.output_interval;
    dt = std::min({dt, config.t_end - t, next_output - t});

    if (config.scheme == Scheme::local_lax_friedrichs)
      state = step_nonlinear(state, dt, params.alpha, ctx, &stats);
    else
      state = step_linearized(state, dt, jac, ctx);

    t += dt;
    if (t >= next_output - 1e-9 || t >= config.t_end - 1e-12) {
      record(t);
      while (next_output <= t + 1e-9) next_output += config.output_interval;
    }
  }

  traj.floored_cells = stats.floored;
  traj.max_junction_residual_pre = stats.junction_residual_pre;
  traj.max_junction_residual_post = stats.junction_residual_post;
  return traj;
}

}  // namespace sociotraffic::solver
