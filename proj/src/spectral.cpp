#include "pulsefront/spectral.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <functional>
#include <limits>
#include <thread>

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>

#include "pulsefront/error.hpp"

namespace pulsefront {

double mu1_ode(const ModelParams& p, const GrowthSpec& growth, double z) {
  Eigen::Matrix2d n = exp2x2<double>(reaction_matrix(p, growth), p.tau);
  n.col(0) *= z;
  return -std::log(perron_root2x2(n)) / p.tau;
}

double eta1_closed_form(const ModelParams& p, const GrowthSpec& growth, double z) {
  const double shift = p.d1 + p.d2 + 2.0 * std::log(z) / p.tau;
  const double s = p.a11 + p.a22;
  return (s - shift + std::sqrt((shift - s) * (shift - s) + 4.0 * p.a12 * growth.slope_at_zero())) / 2.0;
}

double eta1_monodromy(const ModelParams& p, const GrowthSpec& growth, double z) {
  const double lz = std::log(z) / p.tau;
  Eigen::Matrix2d b;
  b << p.a22 - p.d1 - lz, p.a12, growth.slope_at_zero(), p.a11 - p.d2 - lz;
  Eigen::Matrix2d q = exp2x2<double>(b, p.tau);
  q.row(0) *= z;
  return std::log(perron_root2x2(q)) / p.tau;
}

DiscreteInterval discretize(Interval interval, Index n, EndpointMode mode) {
  if (!(interval.hi > interval.lo)) throw GridError("eigen interval must have positive length");
  if (n < 2) throw GridError("eigen discretization needs at least two nodes");
  DiscreteInterval d;
  d.nodes.resize(n);
  if (mode == EndpointMode::Closed) {
    d.dx = interval.length() / static_cast<double>(n - 1);
    d.end_weight = 0.5;
    for (Index i = 0; i < n; ++i) d.nodes(i) = interval.lo + d.dx * static_cast<double>(i);
    d.nodes(n - 1) = interval.hi;
  } else {
    d.dx = interval.length() / static_cast<double>(n + 1);
    d.end_weight = 1.0;
    for (Index i = 0; i < n; ++i) d.nodes(i) = interval.lo + d.dx * static_cast<double>(i + 1);
  }
  return d;
}

namespace {

Eigen::MatrixXd dispersal_matrix(const Kernel& kernel, const DiscreteInterval& disc) {
  const Index n = disc.nodes.size();
  const Eigen::VectorXd taps = kernel.taps(disc.dx);
  const Index half = (taps.size() - 1) / 2;
  Eigen::MatrixXd k = Eigen::MatrixXd::Zero(n, n);
  for (Index j = 0; j < n; ++j) {
    const double w = (j == 0 || j == n - 1) ? disc.end_weight : 1.0;
    for (Index i = std::max<Index>(0, j - half); i <= std::min(n - 1, j + half); ++i) k(i, j) = w * taps(i - j + half);
  }
  return k;
}

// Generator with diagonal reaction rates r1, r2 and couplings c12 (top right), c21.
Eigen::MatrixXd assemble(const Eigen::MatrixXd& k, double d1, double d2, double r1, double r2, double c12,
                         double c21) {
  const Index n = k.rows();
  Eigen::MatrixXd l = Eigen::MatrixXd::Zero(2 * n, 2 * n);
  l.topLeftCorner(n, n) = d1 * k;
  l.bottomRightCorner(n, n) = d2 * k;
  l.topLeftCorner(n, n).diagonal().array() += r1 - d1;
  l.bottomRightCorner(n, n).diagonal().array() += r2 - d2;
  l.topRightCorner(n, n).diagonal().setConstant(c12);
  l.bottomLeftCorner(n, n).diagonal().setConstant(c21);
  return l;
}

struct Perron {
  double log_rho = 0.0;
  Eigen::VectorXd vec;
  double residual = std::numeric_limits<double>::infinity();
  int iterations = 0;
  bool positive_iterates = true;
  std::string method;
};

// Power iteration from the all-ones vector. When the dominance ratio is poor the
// matrix is squared and iteration resumes, which keeps the eigenvector.
Perron perron_dense(const Eigen::MatrixXd& m, const SpectralOptions& o) {
  const Index n = m.rows();
  Perron out;
  out.method = "dense-exponential";
  Eigen::MatrixXd p = m;
  double log_scale = 0.0;
  double power = 1.0;
  Eigen::VectorXd x = Eigen::VectorXd::Ones(n).normalized();
  double prev = -1.0;
  int stage = 0;
  constexpr int stage_budget = 200;
  for (int it = 1; it <= o.power_cap; ++it) {
    Eigen::VectorXd y = p * x;
    const double theta = y.norm();
    if (!(theta > 0.0) || !std::isfinite(theta)) break;
    x = y / theta;
    if (x.minCoeff() <= 0.0) out.positive_iterates = false;
    ++stage;
    out.iterations = it;
    if (prev > 0.0 && std::abs(theta - prev) <= o.power_tol * theta) {
      const double log_rho = (std::log(theta) + log_scale) / power;
      const double residual = (m * x - std::exp(log_rho) * x).norm();
      if (residual < o.residual_tol) {
        out.log_rho = log_rho;
        out.vec = x;
        out.residual = residual;
        return out;
      }
    }
    prev = theta;
    if (stage >= stage_budget && power < 1e7) {
      p = p * p;
      const double s = p.norm();
      p /= s;
      log_scale = 2.0 * log_scale + std::log(s);
      power *= 2.0;
      stage = 0;
      prev = -1.0;
    }
  }

  Eigen::EigenSolver<Eigen::MatrixXd> es(m);
  if (es.info() != Eigen::Success) throw EigenSolveError("power iteration and dense eigensolve both failed");
  Index best = 0;
  for (Index i = 1; i < n; ++i)
    if (std::abs(es.eigenvalues()(i)) > std::abs(es.eigenvalues()(best))) best = i;
  const double rho = es.eigenvalues()(best).real();
  Eigen::VectorXd v = es.eigenvectors().col(best).real();
  if (v.sum() < 0.0) v = -v;
  v.normalize();
  out.method = "dense-eigensolver";
  out.log_rho = std::log(rho);
  out.vec = v;
  out.residual = (m * v - rho * v).norm();
  if (!(rho > 0.0) || !(out.residual < o.residual_tol))
    throw EigenSolveError("principal eigenvalue not resolved: residual " + std::to_string(out.residual));
  return out;
}

using Operator = std::function<Eigen::VectorXd(const Eigen::VectorXd&)>;

// Explicitly restarted Arnoldi for the Perron root of a positive operator.
Perron perron_arnoldi(const Operator& apply, Index n, const SpectralOptions& o) {
  Perron out;
  out.method = "monodromy-arnoldi";
  const Index m = std::min<Index>(o.krylov_dim, n);
  Eigen::VectorXd v = Eigen::VectorXd::Ones(n).normalized();
  int applies = 0;
  while (applies < o.power_cap) {
    Eigen::MatrixXd basis(n, m + 1);
    Eigen::MatrixXd h = Eigen::MatrixXd::Zero(m + 1, m);
    basis.col(0) = v;
    Index k = m;
    for (Index j = 0; j < m; ++j) {
      Eigen::VectorXd w = apply(basis.col(j));
      ++applies;
      for (int pass = 0; pass < 2; ++pass) {
        for (Index i = 0; i <= j; ++i) {
          const double c = basis.col(i).dot(w);
          h(i, j) += c;
          w -= c * basis.col(i);
        }
      }
      h(j + 1, j) = w.norm();
      if (h(j + 1, j) <= 1e-14 * h.col(j).norm()) {
        k = j + 1;
        break;
      }
      basis.col(j + 1) = w / h(j + 1, j);
    }
    Eigen::EigenSolver<Eigen::MatrixXd> es(h.topLeftCorner(k, k));
    Index best = 0;
    for (Index i = 1; i < k; ++i)
      if (std::abs(es.eigenvalues()(i)) > std::abs(es.eigenvalues()(best))) best = i;
    const double theta = es.eigenvalues()(best).real();
    Eigen::VectorXd x = basis.leftCols(k) * es.eigenvectors().col(best).real();
    if (x.sum() < 0.0) x = -x;
    x.normalize();
    const Eigen::VectorXd mx = apply(x);
    ++applies;
    out.iterations = applies;
    const double residual = (mx - theta * x).norm();
    if (theta > 0.0 && residual < o.residual_tol) {
      out.log_rho = std::log(theta);
      out.vec = x;
      out.residual = residual;
      return out;
    }
    v = mx.normalized();
  }
  throw EigenSolveError("matrix-free eigen iteration did not converge");
}

// x -> flow of the linear system over one period by RK4 on Toeplitz convolutions.
class LinearFlow {
public:
  LinearFlow(const Kernel& kernel, const DiscreteInterval& disc, double d1, double d2, double r1, double r2,
             double c12, double c21, double tau, int steps)
      : conv_(kernel, disc.dx), d1_(d1), d2_(d2), r1_(r1), r2_(r2), c12_(c12), c21_(c21), tau_(tau), steps_(steps) {
    n_ = disc.nodes.size();
    active_.first = 0;
    active_.last = n_ - 1;
    active_.first_weight = disc.end_weight;
    active_.last_weight = disc.end_weight;
    ku_.resize(n_);
    kv_.resize(n_);
  }

  Eigen::VectorXd rhs(const Eigen::VectorXd& x) {
    const auto u = x.head(n_);
    const auto v = x.tail(n_);
    conv_.apply(u, active_, 0, n_ - 1, ku_);
    conv_.apply(v, active_, 0, n_ - 1, kv_);
    Eigen::VectorXd out(2 * n_);
    out.head(n_) = d1_ * ku_ + (r1_ - d1_) * u + c12_ * v;
    out.tail(n_) = d2_ * kv_ + (r2_ - d2_) * v + c21_ * u;
    return out;
  }

  Eigen::VectorXd operator()(Eigen::VectorXd x) {
    const double dt = tau_ / steps_;
    for (int s = 0; s < steps_; ++s) {
      const Eigen::VectorXd k1 = rhs(x);
      const Eigen::VectorXd k2 = rhs(x + 0.5 * dt * k1);
      const Eigen::VectorXd k3 = rhs(x + 0.5 * dt * k2);
      const Eigen::VectorXd k4 = rhs(x + dt * k3);
      x += dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
    return x;
  }

private:
  Convolver conv_;
  ActiveNodes active_;
  Index n_ = 0;
  double d1_, d2_, r1_, r2_, c12_, c21_, tau_;
  int steps_;
  Eigen::VectorXd ku_, kv_;
};

void check_inputs(const ModelParams& p, double z, Index n_nodes) {
  if (!(z > 0.0) || z > 1.0) throw Error("pulse slope z must lie in (0, 1]");
  if (!(p.tau > 0.0)) throw Error("tau must be positive");
  if (n_nodes < 2) throw GridError("eigen discretization needs at least two nodes");
}

bool use_dense(const SpectralOptions& o, Index n) {
  if (o.route == EigenRoute::Dense) return true;
  if (o.route == EigenRoute::MatrixFree) return false;
  return n <= o.dense_limit;
}

EigenReport finish(const Perron& perron, double lambda, double tau, const DiscreteInterval& disc, Interval interval,
                   const SpectralOptions& o) {
  EigenReport r;
  const Index n = disc.nodes.size();
  r.lambda1 = lambda;
  r.rho = std::exp(-lambda * tau);
  r.residual = perron.residual;
  r.n_nodes = n;
  r.dx = disc.dx;
  r.interval = interval;
  r.method = perron.method;
  r.iterations = perron.iterations;
  r.positive_iterates = perron.positive_iterates;
  const Index lo = o.endpoints == EndpointMode::Closed ? 1 : 0;
  const Index hi = o.endpoints == EndpointMode::Closed ? n - 2 : n - 1;
  r.positive = true;
  for (Index i = lo; i <= hi; ++i)
    if (!(perron.vec(i) > 0.0) || !(perron.vec(n + i) > 0.0)) r.positive = false;
  if (o.keep_mode) {
    r.nodes = disc.nodes;
    r.u_mode = perron.vec.head(n);
    r.v_mode = perron.vec.tail(n);
  }
  return r;
}

}  // namespace

Eigen::MatrixXd linear_generator(const ModelParams& p, const GrowthSpec& growth, const Kernel& kernel,
                                 const DiscreteInterval& disc) {
  return assemble(dispersal_matrix(kernel, disc), p.d1, p.d2, -p.a11, -p.a22, p.a12, growth.slope_at_zero());
}

EigenReport lambda1(const ModelParams& p, const GrowthSpec& growth, double z, const Kernel& kernel, Interval interval,
                    Index n_nodes, const SpectralOptions& o) {
  check_inputs(p, z, n_nodes);
  const DiscreteInterval disc = discretize(interval, n_nodes, o.endpoints);
  const Index n = n_nodes;
  Perron perron;
  if (use_dense(o, n)) {
    Eigen::MatrixXd m = (linear_generator(p, growth, kernel, disc) * p.tau).exp();
    m.leftCols(n) *= z;
    perron = perron_dense(m, o);
  } else {
    LinearFlow flow(kernel, disc, p.d1, p.d2, -p.a11, -p.a22, p.a12, growth.slope_at_zero(), p.tau, o.rk4_steps);
    perron = perron_arnoldi(
        [&](const Eigen::VectorXd& x) {
          Eigen::VectorXd y = x;
          y.head(n) *= z;
          return flow(std::move(y));
        },
        2 * n, o);
  }
  return finish(perron, -perron.log_rho / p.tau, p.tau, disc, interval, o);
}

EigenReport lambda1(const ModelParams& p, const GrowthSpec& growth, const PulseSpec& pulse, const Kernel& kernel,
                    Interval interval, Index n_nodes, const SpectralOptions& o) {
  return lambda1(p, growth, pulse.slope_at_zero(), kernel, interval, n_nodes, o);
}

EigenReport lambda1_transformed(const ModelParams& p, const GrowthSpec& growth, double z, const Kernel& kernel,
                                Interval interval, Index n_nodes, const SpectralOptions& o) {
  check_inputs(p, z, n_nodes);
  const DiscreteInterval disc = discretize(interval, n_nodes, o.endpoints);
  const Index n = n_nodes;
  const double lz = std::log(z) / p.tau;
  const double r1 = p.a22 - lz;
  const double r2 = p.a11 - lz;
  Perron perron;
  if (use_dense(o, n)) {
    Eigen::MatrixXd q = (assemble(dispersal_matrix(kernel, disc), p.d1, p.d2, r1, r2, p.a12, growth.slope_at_zero()) *
                         p.tau)
                            .exp();
    q.topRows(n) *= z;
    perron = perron_dense(q, o);
  } else {
    LinearFlow flow(kernel, disc, p.d1, p.d2, r1, r2, p.a12, growth.slope_at_zero(), p.tau, o.rk4_steps);
    perron = perron_arnoldi(
        [&](const Eigen::VectorXd& x) {
          Eigen::VectorXd y = flow(x);
          y.head(n) *= z;
          return y;
        },
        2 * n, o);
  }
  const double spectral_bound = perron.log_rho / p.tau;
  return finish(perron, p.a11 + p.a22 - lz - spectral_bound, p.tau, disc, interval, o);
}

EigenReport lambda1_transformed(const ModelParams& p, const GrowthSpec& growth, const PulseSpec& pulse,
                                const Kernel& kernel, Interval interval, Index n_nodes, const SpectralOptions& o) {
  return lambda1_transformed(p, growth, pulse.slope_at_zero(), kernel, interval, n_nodes, o);
}

double find_lstar(const ModelParams& p, const GrowthSpec& growth, const PulseSpec& pulse, const Kernel& kernel,
                  double l_lo, double l_hi, const LstarOptions& o) {
  const double z = pulse.slope_at_zero();
  if (mu1_ode(p, growth, z) >= 0.0)
    throw NoRoot("lambda1(l) stays above mu1 >= 0, so no critical length exists");
  auto lam = [&](double l) {
    return lambda1(p, growth, z, kernel, {-l, l}, o.n_nodes, o.spectral).lambda1;
  };
  if (!(l_lo > 0.0) || !(l_hi > l_lo)) throw NoRoot("critical length bracket must satisfy 0 < l_lo < l_hi");
  double f_lo = lam(l_lo);
  double f_hi = lam(l_hi);
  if (!(f_lo > 0.0) || !(f_hi < 0.0))
    throw NoRoot("lambda1 does not change sign on [" + std::to_string(l_lo) + ", " + std::to_string(l_hi) + "]");
  double lo = l_lo;
  double hi = l_hi;
  while (hi - lo > o.length_tol * hi) {
    const double mid = 0.5 * (lo + hi);
    const double f = lam(mid);
    if (std::abs(f) < o.lambda_tol) return mid;
    (f > 0.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

std::vector<SweepRow> sweep_lambda1(const ModelParams& p, const GrowthSpec& growth, const Kernel& kernel,
                                    const SweepSpec& spec) {
  const std::size_t count = spec.values.size();
  std::vector<SweepRow> rows(count);
  std::vector<std::exception_ptr> errors(count);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < count; i = next++) {
      try {
        const double a = spec.values[i];
        rows[i].axis = a;
        rows[i].report = spec.axis == SweepAxis::HalfLength
                             ? lambda1(p, growth, spec.fixed_z, kernel, {-a, a}, spec.n_nodes, spec.spectral)
                             : lambda1(p, growth, a, kernel, {-spec.fixed_l, spec.fixed_l}, spec.n_nodes,
                                       spec.spectral);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  unsigned threads = spec.threads ? spec.threads : std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(count, 1)));
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);

  if (spec.require_decreasing) {
    for (std::size_t i = 1; i < count; ++i) {
      if (!(rows[i].report.lambda1 < rows[i - 1].report.lambda1))
        throw MonotonicityViolation("lambda1 does not decrease between axis values " +
                                    std::to_string(rows[i - 1].axis) + " and " + std::to_string(rows[i].axis));
    }
  }
  return rows;
}

}  // namespace pulsefront
