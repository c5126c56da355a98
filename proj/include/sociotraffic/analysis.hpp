#pragma once

#include <Eigen/Dense>
#include <array>
#include <complex>
#include <optional>
#include <span>
#include <vector>

#include "sociotraffic/model.hpp"

namespace sociotraffic::analysis {

/// Roots of the characteristic polynomial of one 2x2 class block:
/// lambda^2 - (2u - c rho) lambda + u^2 = 0.
std::array<std::complex<double>, 2> quadratic_block_roots(double rho, double u, double c);

struct Spectrum {
  std::array<std::complex<double>, 4> eigenvalues;
  bool real_and_distinct = false;  // per block; the non-hyperbolic marker is false
};

/// Closed-form eigenvalues of the block-diagonal Jacobian at an operating
/// point. Complex roots are returned as-is with real_and_distinct = false.
Spectrum block_eigenvalues(const model::OperatingPoint& op, double alpha);

struct HyperbolicityResult {
  bool hyperbolic = false;
  double margin1 = 0.0;  // alpha - 4 u1*/rho1*
  double margin2 = 0.0;  // (1-alpha) - 4 u2*/rho2*
  double delta1 = 0.0;   // 1 - 4 u1*/(alpha rho1*)
  double delta2 = 0.0;   // 1 - 4 u2*/((1-alpha) rho2*)
};

/// Strict hyperbolicity test: 4 u1*/rho1* < alpha and 4 u2*/rho2* < 1-alpha.
HyperbolicityResult check_hyperbolicity(const model::OperatingPoint& op, double alpha);

struct MuEntry {
  double mu = 0.0;
  double min_eig_sym = 0.0;          // smallest eigenvalue of sym(Jscript)
  bool positive_definite = false;    // sym(Jscript) > 0
  bool minus_positive_definite = false;  // sym(-Jscript) > 0
  bool eigenvalues_negative = false;     // all Re(eig(Jscript)) < 0
};

struct LyapunovCertificate {
  std::optional<double> mu_found;  // first mu with sym(Jscript) positive definite
  Eigen::Matrix4d script_j = Eigen::Matrix4d::Zero();  // at mu_found, else at the first grid mu
  bool positive_definite = false;
  // Eigenvalue-sign report for script_j; the quadratic-form (symmetric part)
  // results for both signs live in the table.
  bool also_negative_definite = false;
  std::vector<MuEntry> table;
};

/// Boundary stability certificate scan: Jscript(mu) = J - G_B^T J G_B
/// e^{mu(A-B)} over the mu grid, definiteness judged via the symmetric part
/// (the quadratic form only sees it).
LyapunovCertificate lyapunov_certificate(const Eigen::Matrix4d& jac, const Eigen::Matrix4d& g_b,
                                         double a, double b, std::span<const double> mu_grid);

/// 64 log-spaced points in (0,1).
std::vector<double> default_mu_grid();

struct DecayFit {
  double epsilon = 0.0;    // decay rate (-slope of log norms)
  double prefactor = 0.0;  // e^{intercept} / norm(0)
  double r_squared = 0.0;
};

/// Least-squares exponential fit over the tail of a norm history.
/// tail_fraction selects the last portion of the samples (default half).
DecayFit fit_decay(std::span<const double> times, std::span<const double> norms,
                   double tail_fraction = 0.5);

struct StabilityReport {
  double alpha = 0.0;
  model::OperatingPoint op;
  Eigen::Matrix4d jacobian = Eigen::Matrix4d::Zero();
  Spectrum spectrum;
  HyperbolicityResult hyperbolicity;
  LyapunovCertificate certificate;
  std::optional<DecayFit> decay_class1;
  std::optional<DecayFit> decay_class2;
};

StabilityReport build_report(const model::OperatingPoint& op, double alpha,
                             const Eigen::Matrix4d& g_b, double a, double b,
                             std::span<const double> mu_grid);

}  // namespace sociotraffic::analysis
