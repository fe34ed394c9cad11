#include <cmath>

#include <Eigen/Eigenvalues>
#include <unsupported/Eigen/MatrixFunctions>
#include <doctest.h>

#include "fixtures.hpp"
#include "pulsefront/error.hpp"
#include "pulsefront/spectral.hpp"

using namespace pulsefront;
using namespace fixtures;

namespace {

const Kernel& bump() {
  static const Kernel k = build_kernel(bump3());
  return k;
}

double lam(double l, double z, Index n = 201, const GrowthSpec& g = example_growth()) {
  return lambda1(example_params(), g, z, bump(), {-l, l}, n).lambda1;
}

double spectral_radius(const Eigen::MatrixXd& m) { return m.eigenvalues().cwiseAbs().maxCoeff(); }

}  // namespace

TEST_CASE("space-free principal eigenvalue") {
  const auto p = example_params();
  CHECK(mu1_ode(p, example_growth(), 1.0) == doctest::Approx((0.45 - std::sqrt(0.0845)) / 2.0).epsilon(1e-12));
  // scipy expm + eigvals.
  CHECK(mu1_ode(p, example_growth(), 0.01) == doctest::Approx(0.09742434542802876).epsilon(1e-12));
  CHECK(mu1_ode(p, spreading_growth(), 1.0) == doctest::Approx(-0.040753645318366206).epsilon(1e-12));
  CHECK(mu1_ode(p, spreading_growth(), 1.0) == doctest::Approx((0.45 - std::sqrt(0.2825)) / 2.0).epsilon(1e-12));
}

TEST_CASE("2x2 exponential matches the general matrix exponential") {
  Eigen::Matrix2d a;
  a << -0.35, 0.11, 0.7, -0.1;
  const Eigen::Matrix2d e = a.exp();
  CHECK((exp2x2<double>(a, 1.0) - e).cwiseAbs().maxCoeff() < 1e-14);
  a << -0.2, 0.0, 0.0, -0.2;
  CHECK((exp2x2<double>(a, 2.0) - Eigen::Matrix2d::Identity() * std::exp(-0.4)).cwiseAbs().maxCoeff() < 1e-15);
}

TEST_CASE("transformed reaction eigenvalue") {
  const auto p = example_params();
  const double eta = eta1_closed_form(p, example_growth(), 1.0);
  CHECK(eta == doctest::Approx((0.25 + std::sqrt(0.0845)) / 2.0).epsilon(1e-14));
  CHECK(std::abs(eta - 0.270345) < 1e-6);
  CHECK(std::abs(eta - eta1_monodromy(p, example_growth(), 1.0)) < 1e-12);
  CHECK(eta1_closed_form(p, example_growth(), 0.5) == doctest::Approx(1.639648738110622).epsilon(1e-12));
  const auto weak = GrowthSpec::saturating(1e-14, 10.0);
  CHECK(eta1_closed_form(p, weak, 1.0) == doctest::Approx(0.25).epsilon(1e-12));
}

TEST_CASE("frozen eigenvalues on the closed trapezoid grid") {
  // Dense scipy oracle, n = 201 nodes (tests/oracle/oracle.py).
  CHECK(lam(2.0, 1.0) == doctest::Approx(0.10235303213202028).epsilon(1e-8));
  CHECK(lam(4.0, 1.0) == doctest::Approx(0.08755574641259424).epsilon(1e-8));
  CHECK(lam(7.8, 1.0) == doctest::Approx(0.08209799360381177).epsilon(1e-8));
  CHECK(lam(9.75, 1.0) == doctest::Approx(0.08127248599761418).epsilon(1e-8));
  CHECK(lam(4.0, 0.01) == doctest::Approx(0.10532451037810668).epsilon(1e-8));
  CHECK(lam(4.0, 0.5) == doctest::Approx(0.10187838295269097).epsilon(1e-8));
  CHECK(lam(0.5, 1.0, 201, spreading_growth()) == doctest::Approx(0.032148377706003796).epsilon(1e-8));
  CHECK(lam(2.0, 1.0, 201, spreading_growth()) == doctest::Approx(-0.018056194648853614).epsilon(1e-8));
}

TEST_CASE("decoupled nodes reproduce the space-free eigenvalue") {
  auto p = example_params();
  p.d1 = p.d2 = 0.0;
  for (double z : {1.0, 0.3}) {
    const double ode = mu1_ode(p, example_growth(), z);
    CHECK(std::abs(lambda1(p, example_growth(), z, bump(), {-3.0, 5.0}, 60).lambda1 - ode) < 1e-8);
    SpectralOptions c;
    c.endpoints = EndpointMode::Clamped;
    CHECK(std::abs(lambda1(p, example_growth(), z, bump(), {-3.0, 5.0}, 60, c).lambda1 - ode) < 1e-8);
  }
}

TEST_CASE("pulse placement does not change the spectral radius") {
  const auto disc = discretize({-4.0, 4.0}, 60, EndpointMode::Closed);
  const Eigen::MatrixXd flow = linear_generator(example_params(), example_growth(), bump(), disc).exp();
  Eigen::VectorXd z = Eigen::VectorXd::Ones(120);
  z.head(60).setConstant(0.01);
  const double after = spectral_radius(flow * z.asDiagonal());
  const double before = spectral_radius(z.asDiagonal() * flow);
  CHECK(std::abs(after - before) < 1e-10);
}

TEST_CASE("both routes agree on a small configuration") {
  for (double z : {1.0, 0.5, 0.01}) {
    const auto a = lambda1(example_params(), example_growth(), z, bump(), {-4.0, 4.0}, 100);
    const auto b = lambda1_transformed(example_params(), example_growth(), z, bump(), {-4.0, 4.0}, 100);
    CHECK(std::abs(a.lambda1 - b.lambda1) < 1e-6);
  }
}

TEST_CASE("matrix-free route agrees with the dense route") {
  SpectralOptions mf;
  mf.route = EigenRoute::MatrixFree;
  const auto dense = lambda1(example_params(), example_growth(), 0.5, bump(), {-4.0, 4.0}, 121);
  const auto free = lambda1(example_params(), example_growth(), 0.5, bump(), {-4.0, 4.0}, 121, mf);
  CHECK(free.method == "monodromy-arnoldi");
  CHECK(std::abs(dense.lambda1 - free.lambda1) < 1e-8);
  const auto tf = lambda1_transformed(example_params(), example_growth(), 0.5, bump(), {-4.0, 4.0}, 121, mf);
  CHECK(std::abs(dense.lambda1 - tf.lambda1) < 1e-8);
}

TEST_CASE("principal eigenvector is positive") {
  SpectralOptions o;
  o.keep_mode = true;
  const auto r = lambda1(example_params(), example_growth(), 1.0, bump(), {-4.0, 4.0}, 101, o);
  CHECK(r.positive);
  CHECK(r.positive_iterates);
  CHECK(r.residual < 1e-8);
  CHECK(r.u_mode.minCoeff() > 0.0);
  CHECK(r.v_mode.minCoeff() > 0.0);
  CHECK(r.rho == doctest::Approx(std::exp(-r.lambda1)).epsilon(1e-12));
  CHECK(r.nodes.size() == 101);
}

TEST_CASE("eigenvalue bounded below by the space-free value") {
  for (double z : {1.0, 0.01}) {
    const double mu = mu1_ode(example_params(), example_growth(), z);
    for (double l : {2.0, 4.0, 8.0, 16.0}) CHECK(lam(l, z) >= mu - 1e-6);
  }
}

TEST_CASE("monotone in length and in pulse slope, Lipschitz in log z") {
  double prev = lam(2.0, 1.0);
  for (double l : {4.0, 8.0, 16.0}) {
    const double cur = lam(l, 1.0);
    CHECK(cur < prev);
    prev = cur;
  }
  const double zs[] = {0.01, 0.1, 0.5, 1.0};
  for (int i = 0; i + 1 < 4; ++i) {
    const double a = lam(4.0, zs[i]), b = lam(4.0, zs[i + 1]);
    CHECK(b < a);
    CHECK(std::abs(a - b) <= std::abs(std::log(zs[i + 1]) - std::log(zs[i])) + 1e-6);
  }
}

TEST_CASE("grid refinement converges at second order") {
  const double a = lam(4.0, 1.0, 51), b = lam(4.0, 1.0, 101), c = lam(4.0, 1.0, 201);
  CHECK(std::abs(b - c) < std::abs(a - b));
  CHECK(std::abs(a - b) / std::abs(b - c) > 3.0);
}

TEST_CASE("critical length") {
  CHECK_THROWS_AS(find_lstar(example_params(), example_growth(), PulseSpec::identity(), bump(), 0.5, 50.0), NoRoot);
  const double ls = find_lstar(example_params(), spreading_growth(), PulseSpec::identity(), bump(), 0.25, 8.0);
  CHECK(ls == doctest::Approx(1.2212).epsilon(1e-3));
  CHECK(lam(ls / 2.0, 1.0, 201, spreading_growth()) > 0.0);
  CHECK(lam(2.0 * ls, 1.0, 201, spreading_growth()) < 0.0);
  CHECK_THROWS_AS(find_lstar(example_params(), spreading_growth(), PulseSpec::identity(), bump(), 2.0, 8.0), NoRoot);
}

TEST_CASE("sweeps keep axis order and detect non-monotone input") {
  SweepSpec s;
  s.axis = SweepAxis::PulseSlope;
  s.values = {0.01, 0.1, 0.5, 1.0};
  s.fixed_l = 4.0;
  s.n_nodes = 81;
  s.threads = 3;
  const auto rows = sweep_lambda1(example_params(), example_growth(), bump(), s);
  REQUIRE(rows.size() == 4);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    CHECK(rows[i].axis == s.values[i]);
    CHECK(rows[i].report.lambda1 ==
          lambda1(example_params(), example_growth(), s.values[i], bump(), {-4.0, 4.0}, 81).lambda1);
  }
  s.values = {1.0, 0.5};
  CHECK_THROWS_AS(sweep_lambda1(example_params(), example_growth(), bump(), s), MonotonicityViolation);
}

TEST_CASE("invalid eigen inputs") {
  CHECK_THROWS_AS(lambda1(example_params(), example_growth(), 1.0, bump(), {1.0, 1.0}, 50), GridError);
  CHECK_THROWS_AS(lambda1(example_params(), example_growth(), 1.0, bump(), {-1.0, 1.0}, 1), GridError);
  CHECK_THROWS_AS(lambda1(example_params(), example_growth(), 1.5, bump(), {-1.0, 1.0}, 20), Error);
}
