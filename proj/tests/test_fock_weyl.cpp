#include <cmath>
#include <numbers>

#include "doctest.h"
#include "heis/quadrature.hpp"
#include "heis/weyl.hpp"

using namespace heis;

namespace {

// Weyl symbol of |m><k| by direct integration of
// int h_m(q + y/2) h_k(q - y/2) exp(-i p y) dy.
cplx wigner_oracle(int m, int k, double q, double p) {
  auto rule = gauss_legendre(400, -30.0, 30.0);
  cplx s = 0.0;
  for (size_t i = 0; i < rule.nodes.size(); ++i) {
    double y = rule.nodes[i];
    auto hp = hermite_functions(std::max(m, k) + 1, q + y / 2);
    auto hm = hermite_functions(std::max(m, k) + 1, q - y / 2);
    s += rule.weights[i] * hp[m] * hm[k] * std::polar(1.0, -p * y);
  }
  return s;
}

double max_abs(const Eigen::MatrixXcd& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

}  // namespace

TEST_CASE("quadrature rules integrate known moments") {
  auto gh = gauss_hermite(30);
  double m0 = 0, m2 = 0, m4 = 0;
  for (size_t i = 0; i < gh.nodes.size(); ++i) {
    double t = gh.nodes[i], g = std::exp(-t * t) * gh.weights[i];
    m0 += g;
    m2 += g * t * t;
    m4 += g * t * t * t * t;
  }
  const double sp = std::sqrt(std::numbers::pi);
  CHECK(m0 == doctest::Approx(sp).epsilon(1e-13));
  CHECK(m2 == doctest::Approx(sp / 2).epsilon(1e-13));
  CHECK(m4 == doctest::Approx(3 * sp / 4).epsilon(1e-13));
  auto gl = gauss_legendre(12, 0.0, 2.0);
  double s = 0;
  for (size_t i = 0; i < gl.nodes.size(); ++i) s += gl.weights[i] * std::pow(gl.nodes[i], 9);
  CHECK(s == doctest::Approx(std::pow(2.0, 10) / 10).epsilon(1e-13));
}

TEST_CASE("truncation basis") {
  for (int n : {1, 2, 3}) {
    for (int N : {0, 3, 7}) {
      FockTruncation t(n, N);
      CHECK(t.size() == binomial(N + n, n));
      for (int i = 0; i < t.size(); ++i) {
        CHECK(t.index_of(t.multi_index(i)) == i);
        if (i > 0) CHECK(t.level(i) >= t.level(i - 1));
      }
      for (int L = 0; L <= N; ++L) CHECK(t.level(t.block_size(L) - 1) == L);
    }
  }
  CHECK_THROWS_AS(FockTruncation(0, 3), std::invalid_argument);
  FockTruncation t(2, 2);
  CHECK(t.multi_index(1) == std::vector<int>{1, 0});
  CHECK(t.multi_index(2) == std::vector<int>{0, 1});
}

TEST_CASE("quantized fields satisfy the commutation relations") {
  for (int n : {1, 2}) {
    FockTruncation t(n, 8);
    const int b = t.block_size(7);
    for (auto conv : {FrameConvention::section2(), FrameConvention::section5()}) {
      const double c = conv.bracket_constant();
      for (int mu : {1, -1}) {
        CHECK(max_abs(quantize_field(0, mu, t, conv) - double(mu) * Eigen::MatrixXcd::Identity(t.size(), t.size())) ==
              0.0);
        for (int i = 1; i <= 2 * n; ++i) {
          Eigen::MatrixXcd Ai = quantize_field(i, mu, t, conv);
          CHECK(max_abs(Ai - Ai.adjoint()) <= 1e-15);
          for (int r = 0; r < t.size(); ++r) CHECK((Ai.row(r).array() != cplx(0.0)).count() <= 2 * n + 1);
          for (int k = 1; k <= 2 * n; ++k) {
            Eigen::MatrixXcd Ak = quantize_field(k, mu, t, conv);
            Eigen::MatrixXcd comm = (Ai * Ak - Ak * Ai).topLeftCorner(b, b);
            cplx expected = 0.0;
            if (i <= n && k == i + n) expected = cplx(0, -c * mu);
            if (k <= n && i == k + n) expected = cplx(0, c * mu);
            CHECK(max_abs(comm - expected * Eigen::MatrixXcd::Identity(b, b)) <= 1e-12);
          }
        }
      }
    }
  }
  CHECK_THROWS_AS(quantize_field(3, 1, FockTruncation(1, 4), FrameConvention::section5()), std::out_of_range);
}

TEST_CASE("sublaplacian spectrum") {
  for (int n : {1, 2}) {
    FockTruncation t(n, 10);
    for (auto conv : {FrameConvention::section2(), FrameConvention::section5()}) {
      const double cc = std::abs(conv.bracket_constant());
      for (int mu : {1, -1}) {
        Eigen::MatrixXcd S = quantized_sublaplacian(mu, t, conv);
        const int b = t.block_size(t.N() - 1);
        Eigen::MatrixXcd blk = S.topLeftCorner(b, b);
        Eigen::MatrixXcd expected = Eigen::MatrixXcd::Zero(b, b);
        for (int i = 0; i < b; ++i) expected(i, i) = cc * (t.level(i) + n / 2.0);
        CHECK(max_abs(blk - expected) <= 1e-10);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(S.topLeftCorner(t.block_size(t.N() - 2), t.block_size(t.N() - 2)));
        CHECK(es.eigenvalues().minCoeff() >= 0.0);
      }
    }
  }
}

TEST_CASE("single-mode Weyl symbols match direct integration") {
  for (auto [q, p] : {std::pair{0.3, -0.8}, std::pair{1.1, 0.4}, std::pair{-0.5, 1.7}}) {
    auto table = single_mode_wigner_table(5, q, p);
    for (int m = 0; m <= 5; ++m)
      for (int k = 0; k <= 5; ++k) CHECK(std::abs(table(m, k) - wigner_oracle(m, k, q, p)) <= 1e-10);
  }
}

TEST_CASE("weyl_to_matrix on reference symbols") {
  FockTruncation t(1, 20);
  const int d = t.size();
  for (int mu : {1, -1}) {
    auto one = weyl_to_matrix([](const Eigen::VectorXd&) { return cplx(1.0); }, mu, t);
    CHECK(max_abs(one.matrix - Eigen::MatrixXcd::Identity(d, d)) <= 1e-10);
    CHECK(one.error_estimate <= 1e-10);
    auto r2 = weyl_to_matrix([](const Eigen::VectorXd& e) { return cplx(e.squaredNorm()); }, mu, t);
    Eigen::MatrixXcd expected = Eigen::MatrixXcd::Zero(d, d);
    for (int i = 0; i < d; ++i) expected(i, i) = 2 * t.level(i) + 1;
    CHECK(max_abs(r2.matrix - expected) <= 1e-10);
    auto g = weyl_to_matrix([](const Eigen::VectorXd& e) { return cplx(2.0 * std::exp(-e.squaredNorm())); }, mu, t);
    Eigen::MatrixXcd vac = Eigen::MatrixXcd::Zero(d, d);
    vac(0, 0) = 1.0;
    CHECK(max_abs(g.matrix - vac) <= 1e-8);
  }
  FockTruncation t2(2, 3);
  auto g2 = weyl_to_matrix([](const Eigen::VectorXd& e) { return cplx(4.0 * std::exp(-e.squaredNorm())); }, 1, t2);
  Eigen::MatrixXcd vac2 = Eigen::MatrixXcd::Zero(t2.size(), t2.size());
  vac2(0, 0) = 1.0;
  CHECK(max_abs(g2.matrix - vac2) <= 1e-3);
  auto r22 = weyl_to_matrix([](const Eigen::VectorXd& e) { return cplx(e.squaredNorm()); }, -1, t2);
  for (int i = 0; i < t2.size(); ++i) CHECK(std::abs(r22.matrix(i, i) - double(2 * t2.level(i) + 2)) <= 1e-10);
}

TEST_CASE("fields are Weyl quantizations of linear symbols") {
  for (int n : {1, 2}) {
    FockTruncation t(n, n == 1 ? 10 : 3);
    auto conv = FrameConvention::section5();
    for (int mu : {1, -1}) {
      for (int j = 1; j <= 2 * n; ++j) {
        auto w = weyl_to_matrix([j](const Eigen::VectorXd& e) { return cplx(e(j - 1)); }, mu, t);
        CHECK(max_abs(w.matrix - quantize_field(j, mu, t, conv)) <= 1e-10);
      }
    }
  }
}

TEST_CASE("matrix_to_weyl reconstruction") {
  FockTruncation t(1, 24);
  const int d = t.size();
  const double R = t.reliability_radius();
  CHECK(R > 1.0);
  Eigen::MatrixXcd I = Eigen::MatrixXcd::Identity(d, d);
  Eigen::MatrixXcd vac = Eigen::MatrixXcd::Zero(d, d);
  vac(0, 0) = 1.0;
  Eigen::MatrixXcd num = Eigen::MatrixXcd::Zero(d, d);
  for (int i = 0; i < d; ++i) num(i, i) = 2 * t.level(i) + 1;
  CHECK(std::abs(matrix_to_weyl(vac, t, Eigen::Vector2d::Zero(), 1) - 2.0) <= 1e-14);
  for (double r : {0.0, 0.3 * R, 0.7 * R, 0.999 * R}) {
    for (double th : {0.0, 0.9, 2.5}) {
      Eigen::Vector2d eta(r * std::cos(th), r * std::sin(th));
      for (int mu : {1, -1}) {
        CHECK(std::abs(matrix_to_weyl(I, t, eta, mu) - 1.0) <= 1e-9);
        CHECK(std::abs(matrix_to_weyl(num, t, eta, mu) - eta.squaredNorm()) <= 1e-8);
      }
    }
  }
  CHECK_THROWS_AS(matrix_to_weyl(I, t, Eigen::Vector2d(R + 0.01, 0.0), 1), OutOfReliabilityRadius);
  FockTruncation t2(2, 10);
  Eigen::MatrixXcd vac2 = Eigen::MatrixXcd::Zero(t2.size(), t2.size());
  vac2(0, 0) = 1.0;
  CHECK(std::abs(matrix_to_weyl(vac2, t2, Eigen::Vector4d::Zero(), -1) - 4.0) <= 1e-14);
}

TEST_CASE("polynomial round trip") {
  FockTruncation t(1, 12);
  auto poly = [](const Eigen::VectorXd& e) {
    return cplx(e(0) * e(0) * e(0) - 2 * e(0) * e(1) * e(1) + e(1) + 1.0, 0.5 * e(0) * e(1));
  };
  const double R = t.reliability_radius();
  for (int mu : {1, -1}) {
    auto w = weyl_to_matrix(poly, mu, t);
    for (double th : {0.2, 1.3, 4.0}) {
      for (double r : {0.0, 0.5 * R, 0.999 * R}) {
        Eigen::Vector2d eta(r * std::cos(th), r * std::sin(th));
        CHECK(std::abs(matrix_to_weyl(w.matrix, t, eta, mu) - poly(eta)) <= 1e-8);
      }
    }
  }
}
