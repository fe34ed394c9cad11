#pragma once

#include <cmath>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "pulsefront/grid.hpp"
#include "pulsefront/model.hpp"

namespace pulsefront {

/// Reaction part of the linearisation at zero: rows (-a11, a12) and (G'(0), -a22).
template <typename Scalar = double>
Eigen::Matrix<Scalar, 2, 2> reaction_matrix(const ModelParams& p, const GrowthSpec& growth) {
  Eigen::Matrix<Scalar, 2, 2> a;
  a << Scalar(-p.a11), Scalar(p.a12), Scalar(growth.slope_at_zero()), Scalar(-p.a22);
  return a;
}

/// exp(t A) for a real 2x2 matrix with real eigenvalues, through
/// exp(t A) = e^{m t} (cosh(d t) I + sinh(d t)/d (A - m I)), m = tr/2, d^2 = disc.
/// Cooperative matrices always have d^2 >= 0.
template <typename Scalar>
Eigen::Matrix<Scalar, 2, 2> exp2x2(const Eigen::Matrix<Scalar, 2, 2>& a, Scalar t) {
  using std::cosh;
  using std::exp;
  using std::sinh;
  using std::sqrt;
  const Scalar m = (a(0, 0) + a(1, 1)) / Scalar(2);
  const Scalar half = (a(0, 0) - a(1, 1)) / Scalar(2);
  const Scalar d2 = half * half + a(0, 1) * a(1, 0);
  const Scalar d = sqrt(d2 > Scalar(0) ? d2 : Scalar(0));
  const Scalar sh = d > Scalar(0) ? sinh(d * t) / d : t;
  Eigen::Matrix<Scalar, 2, 2> shifted = a;
  shifted(0, 0) -= m;
  shifted(1, 1) -= m;
  return exp(m * t) * (cosh(d * t) * Eigen::Matrix<Scalar, 2, 2>::Identity() + sh * shifted);
}

/// Largest eigenvalue of a 2x2 matrix with non-negative off-diagonal entries.
template <typename Scalar>
Scalar perron_root2x2(const Eigen::Matrix<Scalar, 2, 2>& m) {
  using std::sqrt;
  const Scalar half = (m(0, 0) - m(1, 1)) / Scalar(2);
  return (m(0, 0) + m(1, 1)) / Scalar(2) + sqrt(half * half + m(0, 1) * m(1, 0));
}

/// Principal eigenvalue of the space-free impulsive problem:
/// -(1/tau) ln rho(exp(A tau) diag(z, 1)).
double mu1_ode(const ModelParams& params, const GrowthSpec& growth, double z);

/// (S - D + sqrt((D - S)^2 + 4 a12 G'(0))) / 2 with S = a11 + a22 and
/// D = d1 + d2 + 2 ln z / tau. Agrees with eta1_monodromy at z = 1 only.
double eta1_closed_form(const ModelParams& params, const GrowthSpec& growth, double z);

/// (1/tau) ln rho(diag(z, 1) exp(tau B)) for B the transformed reaction matrix with
/// dispersal losses: rows (a22 - d1 - ln z/tau, a12) and (G'(0), a11 - d2 - ln z/tau).
double eta1_monodromy(const ModelParams& params, const GrowthSpec& growth, double z);

/// How the interval endpoints enter the discrete operator.
enum class EndpointMode {
  Closed,  ///< trapezoid on [r, s] with the endpoints as unknowns (second order)
  Clamped  ///< interior unknowns only, endpoint values fixed at zero
};

enum class EigenRoute { Auto, Dense, MatrixFree };

struct SpectralOptions {
  EndpointMode endpoints = EndpointMode::Closed;
  EigenRoute route = EigenRoute::Auto;
  Index dense_limit = 800;  ///< nodes per component above which Auto goes matrix-free
  double power_tol = 1e-10;
  int power_cap = 10000;
  double residual_tol = 1e-8;
  int rk4_steps = 2000;     ///< per period, matrix-free route
  int krylov_dim = 24;
  bool keep_mode = false;   ///< store the eigenvector in the report
};

struct EigenReport {
  double lambda1 = 0.0;
  double rho = 0.0;
  double residual = 0.0;
  Index n_nodes = 0;
  double dx = 0.0;
  Interval interval;
  std::string method;
  int iterations = 0;
  bool positive = false;  ///< eigenvector strictly positive on interior nodes
  bool positive_iterates = true;
  Eigen::VectorXd nodes;  ///< filled when keep_mode is set
  Eigen::VectorXd u_mode;
  Eigen::VectorXd v_mode;
};

/// Node positions and trapezoid weights of the discrete operator on [r, s].
struct DiscreteInterval {
  Eigen::VectorXd nodes;
  double dx = 0.0;
  double end_weight = 0.5;  ///< relative weight of the first and last unknown
};

DiscreteInterval discretize(Interval interval, Index n_nodes, EndpointMode mode);

/// Dense 2n x 2n generator of the linearised flow.
Eigen::MatrixXd linear_generator(const ModelParams& params, const GrowthSpec& growth, const Kernel& kernel,
                                 const DiscreteInterval& disc);

/// Principal eigenvalue of the impulsive periodic problem on [r, s] with pulse slope z.
EigenReport lambda1(const ModelParams& params, const GrowthSpec& growth, double z, const Kernel& kernel,
                    Interval interval, Index n_nodes, const SpectralOptions& options = {});
EigenReport lambda1(const ModelParams& params, const GrowthSpec& growth, const PulseSpec& pulse,
                    const Kernel& kernel, Interval interval, Index n_nodes, const SpectralOptions& options = {});

/// Same quantity through the transformed problem: the spectral bound s(C) of the
/// reversed-time system with swapped reaction rates, then
/// lambda1 = a11 + a22 - ln z/tau - s(C).
EigenReport lambda1_transformed(const ModelParams& params, const GrowthSpec& growth, double z, const Kernel& kernel,
                                Interval interval, Index n_nodes, const SpectralOptions& options = {});
EigenReport lambda1_transformed(const ModelParams& params, const GrowthSpec& growth, const PulseSpec& pulse,
                                const Kernel& kernel, Interval interval, Index n_nodes,
                                const SpectralOptions& options = {});

struct LstarOptions {
  Index n_nodes = 201;
  double lambda_tol = 1e-6;
  double length_tol = 1e-9;
  SpectralOptions spectral;
};

/// Half-length l* with lambda1(-l*, l*) = 0, by bisection on [l_lo, l_hi].
/// Throws NoRoot when mu1 >= 0 or when the bracket does not straddle zero.
double find_lstar(const ModelParams& params, const GrowthSpec& growth, const PulseSpec& pulse, const Kernel& kernel,
                  double l_lo, double l_hi, const LstarOptions& options = {});

enum class SweepAxis { PulseSlope, HalfLength };

struct SweepRow {
  double axis = 0.0;
  EigenReport report;
};

struct SweepSpec {
  SweepAxis axis = SweepAxis::HalfLength;
  std::vector<double> values;  ///< sorted ascending
  double fixed_z = 1.0;        ///< used on the half-length axis
  double fixed_l = 4.0;        ///< used on the pulse-slope axis
  Index n_nodes = 201;
  unsigned threads = 0;        ///< 0 = hardware concurrency
  bool require_decreasing = true;
  SpectralOptions spectral;
};

/// lambda1 along an axis. Rows come back in axis order regardless of scheduling.
/// Throws MonotonicityViolation when require_decreasing is set and some step fails
/// to decrease strictly.
std::vector<SweepRow> sweep_lambda1(const ModelParams& params, const GrowthSpec& growth, const Kernel& kernel,
                                    const SweepSpec& spec);

}  // namespace pulsefront
