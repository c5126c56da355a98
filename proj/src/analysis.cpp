#include "sociotraffic/analysis.hpp"

#include <algorithm>
#include <cmath>

#include "sociotraffic/errors.hpp"

namespace sociotraffic::analysis {

std::array<std::complex<double>, 2> quadratic_block_roots(double rho, double u, double c) {
  const double trace = 2.0 * u - c * rho;
  const double det = u * u;
  const double disc = trace * trace - 4.0 * det;
  if (disc >= 0.0) {
    const double s = std::sqrt(disc);
    return {std::complex<double>(0.5 * (trace - s), 0.0),
            std::complex<double>(0.5 * (trace + s), 0.0)};
  }
  const double s = std::sqrt(-disc);
  return {std::complex<double>(0.5 * trace, -0.5 * s), std::complex<double>(0.5 * trace, 0.5 * s)};
}

Spectrum block_eigenvalues(const model::OperatingPoint& op, double alpha) {
  const auto b1 = quadratic_block_roots(op.rho1, op.u1, alpha);
  const auto b2 = quadratic_block_roots(op.rho2, op.u2, 1.0 - alpha);
  Spectrum s{{b1[0], b1[1], b2[0], b2[1]}, false};
  const auto real_distinct = [](const std::array<std::complex<double>, 2>& r) {
    return r[0].imag() == 0.0 && r[1].imag() == 0.0 && r[0].real() != r[1].real();
  };
  s.real_and_distinct = real_distinct(b1) && real_distinct(b2);
  return s;
}

HyperbolicityResult check_hyperbolicity(const model::OperatingPoint& op, double alpha) {
  HyperbolicityResult r;
  r.margin1 = alpha - 4.0 * op.u1 / op.rho1;
  r.margin2 = (1.0 - alpha) - 4.0 * op.u2 / op.rho2;
  r.delta1 = 1.0 - 4.0 * op.u1 / (alpha * op.rho1);
  r.delta2 = 1.0 - 4.0 * op.u2 / ((1.0 - alpha) * op.rho2);
  r.hyperbolic = r.margin1 > 0.0 && r.margin2 > 0.0;
  return r;
}

namespace {

bool sym_positive_definite(const Eigen::Matrix4d& m, double* min_eig = nullptr) {
  const Eigen::Matrix4d sym = 0.5 * (m + m.transpose());
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix4d> es(sym);
  const double lo = es.eigenvalues().minCoeff();
  if (min_eig) *min_eig = lo;
  return lo > 0.0;
}

bool eigs_negative(const Eigen::Matrix4d& m) {
  Eigen::EigenSolver<Eigen::Matrix4d> es(m);
  for (int i = 0; i < 4; ++i)
    if (es.eigenvalues()(i).real() >= 0.0) return false;
  return true;
}

}  // namespace

LyapunovCertificate lyapunov_certificate(const Eigen::Matrix4d& jac, const Eigen::Matrix4d& g_b,
                                         double a, double b, std::span<const double> mu_grid) {
  if (!(a < b)) throw ValidationError("lyapunov_certificate: requires A < B");

  LyapunovCertificate cert;
  cert.table.reserve(mu_grid.size());
  for (double mu : mu_grid) {
    if (!(mu > 0.0)) throw ValidationError("lyapunov_certificate: mu grid must be positive");
    const Eigen::Matrix4d script_j = jac - g_b.transpose() * jac * g_b * std::exp(mu * (a - b));

    MuEntry entry;
    entry.mu = mu;
    entry.positive_definite = sym_positive_definite(script_j, &entry.min_eig_sym);
    entry.minus_positive_definite = sym_positive_definite(Eigen::Matrix4d(-script_j));
    entry.eigenvalues_negative = eigs_negative(script_j);
    cert.table.push_back(entry);

    if (entry.positive_definite && !cert.mu_found) {
      cert.mu_found = mu;
      cert.script_j = script_j;
    }
  }

  if (!cert.mu_found && !mu_grid.empty()) {
    const double mu = mu_grid.front();
    cert.script_j = jac - g_b.transpose() * jac * g_b * std::exp(mu * (a - b));
  }
  cert.positive_definite = cert.mu_found.has_value();
  cert.also_negative_definite = eigs_negative(cert.script_j);
  return cert;
}

std::vector<double> default_mu_grid() {
  // 64 log-spaced points in (0,1): 10^-4 .. 10^-1e-2-ish up to just below 1.
  std::vector<double> grid(64);
  const double lo = std::log(1e-4), hi = std::log(0.99);
  for (std::size_t i = 0; i < grid.size(); ++i)
    grid[i] = std::exp(lo + (hi - lo) * static_cast<double>(i) / 63.0);
  return grid;
}

DecayFit fit_decay(std::span<const double> times, std::span<const double> norms,
                   double tail_fraction) {
  if (times.size() != norms.size())
    throw ValidationError("fit_decay: times and norms must have equal length");
  if (!(tail_fraction > 0.0 && tail_fraction <= 1.0))
    throw ValidationError("fit_decay: tail_fraction must lie in (0,1]");

  const std::size_t n = times.size();
  const std::size_t count = std::max<std::size_t>(
      static_cast<std::size_t>(std::ceil(tail_fraction * static_cast<double>(n))), 1);
  if (count < 10) throw ValidationError("fit_decay: needs >= 10 samples in the tail window");
  const std::size_t start = n - count;

  double sx = 0, sy = 0;
  for (std::size_t i = start; i < n; ++i) {
    if (!(norms[i] > 0.0))
      throw ValidationError("fit_decay: norms must be positive on the fit window");
    sx += times[i];
    sy += std::log(norms[i]);
  }
  const double mx = sx / static_cast<double>(count);
  const double my = sy / static_cast<double>(count);

  double sxx = 0, sxy = 0, syy = 0;
  for (std::size_t i = start; i < n; ++i) {
    const double dx = times[i] - mx;
    const double dy = std::log(norms[i]) - my;
    sxx += dx * dx;
    sxy += dx * dy;
    syy += dy * dy;
  }
  if (!(sxx > 0.0)) throw ValidationError("fit_decay: degenerate time window");

  DecayFit fit;
  const double slope = sxy / sxx;
  const double intercept = my - slope * mx;
  fit.epsilon = -slope;
  fit.prefactor = std::exp(intercept) / norms[0];
  if (syy <= 1e-30) {
    // Constant data: a zero-slope line fits exactly.
    fit.epsilon = 0.0;
    fit.r_squared = 1.0;
  } else {
    fit.r_squared = (sxy * sxy) / (sxx * syy);
  }
  return fit;
}

StabilityReport build_report(const model::OperatingPoint& op, double alpha,
                             const Eigen::Matrix4d& g_b, double a, double b,
                             std::span<const double> mu_grid) {
  StabilityReport report;
  report.alpha = alpha;
  report.op = op;
  report.jacobian = model::jacobian(op, alpha);
  report.spectrum = block_eigenvalues(op, alpha);
  report.hyperbolicity = check_hyperbolicity(op, alpha);
  report.certificate = lyapunov_certificate(report.jacobian, g_b, a, b, mu_grid);
  return report;
}

}  // namespace sociotraffic::analysis
