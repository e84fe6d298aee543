#include <random>

#include "doctest.h"
#include "heis/group.hpp"

using namespace heis;

namespace {

Eigen::VectorXd random_vec(std::mt19937_64& rng, int size) {
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  Eigen::VectorXd v(size);
  for (int i = 0; i < size; ++i) v(i) = u(rng);
  return v;
}

}  // namespace

TEST_CASE("group_mul identity and substitution") {
  GroupElement y(1, Eigen::Vector3d(0.3, -1.2, 0.7));
  CHECK((group_mul(GroupElement::identity(1), y).coords() - y.coords()).norm() == 0.0);
  GroupElement a(1, Eigen::Vector3d(0, 1, 0));
  GroupElement b(1, Eigen::Vector3d(0, 0, 1));
  Eigen::Vector3d expected(-1, 1, 1);
  CHECK((group_mul(a, b).coords() - expected).norm() == 0.0);
}

TEST_CASE("group_mul is a group law") {
  std::mt19937_64 rng(7);
  for (int n : {1, 2}) {
    for (auto conv : {FrameConvention::section2(), FrameConvention::section5()}) {
      for (int t = 0; t < 100; ++t) {
        GroupElement x(n, random_vec(rng, 2 * n + 1));
        GroupElement y(n, random_vec(rng, 2 * n + 1));
        GroupElement z(n, random_vec(rng, 2 * n + 1));
        auto lhs = group_mul(group_mul(x, y, conv), z, conv);
        auto rhs = group_mul(x, group_mul(y, z, conv), conv);
        CHECK((lhs.coords() - rhs.coords()).norm() <= 1e-12);
        CHECK(group_mul(x, group_inverse(x), conv).coords().norm() <= 1e-12);
      }
    }
  }
}

TEST_CASE("group_mul rejects mismatched dimensions") {
  CHECK_THROWS_AS(group_mul(GroupElement::identity(1), GroupElement::identity(2)), std::invalid_argument);
  CHECK_THROWS_AS(GroupElement(1, Eigen::VectorXd::Zero(4)), std::invalid_argument);
}

TEST_CASE("dilate and homogeneous norm") {
  Covector xi(Eigen::Vector3d(1, 1, 1));
  CHECK((dilate(1.0, xi).coords() - xi.coords()).norm() == 0.0);
  CHECK((dilate(2.0, xi).coords() - Eigen::Vector3d(4, 2, 2)).norm() == 0.0);
  CHECK_THROWS_AS(dilate(0.0, xi), std::invalid_argument);
  CHECK_THROWS_AS(dilate(-1.0, xi), std::invalid_argument);
  CHECK(homogeneous_norm(Covector(Eigen::Vector3d(1, 0, 0))) == doctest::Approx(1.0));
  CHECK(homogeneous_norm(Covector(Eigen::Vector3d(0, 2, 0))) == doctest::Approx(2.0));
  CHECK(homogeneous_norm(Covector(Eigen::Vector3d::Zero())) == 0.0);

  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> ut(0.1, 5.0);
  for (int k = 0; k < 100; ++k) {
    Covector c(random_vec(rng, 5));
    double t = ut(rng);
    CHECK(std::abs(homogeneous_norm(dilate(t, c)) - t * homogeneous_norm(c)) <= 1e-12 * (1 + t * homogeneous_norm(c)));
  }
}

TEST_CASE("frame commutators on quadratic polynomials") {
  for (int n : {1, 2}) {
    for (auto conv : {FrameConvention::section2(), FrameConvention::section5()}) {
      const int nv = 2 * n + 1;
      auto basis = monomial_basis(nv, 2);
      for (int i = 0; i <= 2 * n; ++i) {
        for (int k = 0; k <= 2 * n; ++k) {
          auto Xi = left_invariant_field(n, i, conv);
          auto Xk = left_invariant_field(n, k, conv);
          double coeff = 0.0;
          if (i >= 1 && i <= n && k == i + n) coeff = conv.bracket_constant();
          if (k >= 1 && k <= n && i == k + n) coeff = -conv.bracket_constant();
          auto X0 = left_invariant_field(n, 0, conv);
          for (const auto& f : basis) {
            auto diff = apply_commutator(Xi, Xk, f) - X0.apply(f) * coeff;
            CHECK(diff.is_zero());
          }
        }
      }
    }
  }
}

TEST_CASE("commutator values on x_0") {
  Polynomial x0 = Polynomial::variable(3, 0);
  auto s2 = FrameConvention::section2();
  auto s5 = FrameConvention::section5();
  CHECK(apply_commutator(left_invariant_field(1, 1, s2), left_invariant_field(1, 2, s2), x0).constant_term() == -2.0);
  CHECK(apply_commutator(left_invariant_field(1, 1, s5), left_invariant_field(1, 2, s5), x0).constant_term() == -1.0);
  CHECK(apply_commutator(left_invariant_field(1, 0, s2), left_invariant_field(1, 1, s2), x0).is_zero());
  CHECK_THROWS_AS(left_invariant_field(1, 3, s5), std::out_of_range);
}

TEST_CASE("fields are left invariant") {
  // X_j f(x) = d/dt f(x . t e_j) at t = 0, checked on the quadratic f = x_0 * x_1.
  const int n = 1;
  for (auto conv : {FrameConvention::section2(), FrameConvention::section5()}) {
    Polynomial f = Polynomial::variable(3, 0) * Polynomial::variable(3, 1);
    std::vector<double> x = {0.4, -0.7, 1.3};
    for (int j = 0; j <= 2; ++j) {
      const double h = 1e-4;
      Eigen::Vector3d e = Eigen::Vector3d::Zero();
      e(j) = 1.0;
      auto eval_at = [&](double t) {
        auto g = group_mul(GroupElement(n, Eigen::Vector3d(x[0], x[1], x[2])), GroupElement(n, t * e), conv);
        return f.evaluate({g[0], g[1], g[2]});
      };
      double fd = (eval_at(h) - eval_at(-h)) / (2 * h);
      CHECK(left_invariant_field(n, j, conv).apply(f).evaluate(x) == doctest::Approx(fd).epsilon(1e-7));
    }
  }
}

TEST_CASE("tangent group product") {
  auto L = levi_form(1, FrameConvention::section2());
  GradedVector x{0.5, Eigen::Vector2d(1, 0)};
  GradedVector y{0.25, Eigen::Vector2d(0, 1)};
  auto z = tangent_group_mul(x, y, L);
  CHECK(z.grade2 == doctest::Approx(0.75 + 0.5 * L(0, 1)));
  CHECK(L(0, 1) == -2.0);
  auto w = tangent_group_mul(x, x, L);
  CHECK(w.grade2 == doctest::Approx(1.0));

  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (auto conv : {FrameConvention::section2(), FrameConvention::section5()}) {
    auto Ln = levi_form(2, conv);
    CHECK((Ln + Ln.transpose()).norm() == 0.0);
    for (int k = 0; k < 100; ++k) {
      GradedVector a{u(rng), random_vec(rng, 4)}, b{u(rng), random_vec(rng, 4)}, c{u(rng), random_vec(rng, 4)};
      auto l = tangent_group_mul(tangent_group_mul(a, b, Ln), c, Ln);
      auto r = tangent_group_mul(a, tangent_group_mul(b, c, Ln), Ln);
      CHECK(std::abs(l.grade2 - r.grade2) <= 1e-12);
      CHECK((l.grade1 - r.grade1).norm() <= 1e-12);
      double t = 0.5 + std::abs(u(rng));
      auto d1 = dilate(t, tangent_group_mul(a, b, Ln));
      auto d2 = tangent_group_mul(dilate(t, a), dilate(t, b), Ln);
      CHECK(std::abs(d1.grade2 - d2.grade2) <= 1e-12);
      CHECK((d1.grade1 - d2.grade1).norm() <= 1e-12);
    }
  }
}

TEST_CASE("trivial chart and frame dump") {
  GroupElement a(1, Eigen::Vector3d(1, 2, 3));
  TrivialChart chart{a};
  CHECK(chart.apply(a).coords().norm() <= 1e-15);
  CHECK(chart.jacobian() == 1.0);
  auto dump = dump_frame(1, FrameConvention::section5());
  CHECK(dump.find("X1:") != std::string::npos);
  CHECK(dump.find("0.5*x2") != std::string::npos);
}
