#include <cmath>

#include "doctest.h"
#include "heis/kohn.hpp"

using namespace heis;

TEST_CASE("exterior algebra") {
  ExteriorAlgebra A(4);
  CHECK(A.dim(2) == 6);
  for (int k = 0; k < 4; ++k) {
    for (int i = 0; i < 4; ++i) {
      for (int j = 0; j < 4; ++j) {
        // e_i ∧ e_j = −e_j ∧ e_i
        if (k + 2 <= 4) {
          Eigen::MatrixXd anti = A.wedge(i, k + 1) * A.wedge(j, k) + A.wedge(j, k + 1) * A.wedge(i, k);
          CHECK(anti.norm() == 0.0);
        }
        // ι_i ε_j + ε_j ι_i = δ_ij
        Eigen::MatrixXd car = A.contract(i, k + 1) * A.wedge(j, k);
        if (k > 0) car += A.wedge(j, k - 1) * A.contract(i, k);
        CHECK((car - (i == j ? 1.0 : 0.0) * Eigen::MatrixXd::Identity(A.dim(k), A.dim(k))).norm() == 0.0);
      }
    }
  }
  PQFiber f(2, 1, 1);
  CHECK(f.dim() == 4);
  CHECK(f.descriptor().labels[0] == "t1^tb1");
  CHECK(PQFiber(3, 2, 1).dim() == 9);
  CHECK_THROWS_AS(PQFiber(2, 3, 0), std::out_of_range);
}

TEST_CASE("dbar symbols") {
  for (int n : {1, 2}) {
    auto ctx = make_kohn_context(n, 8);
    for (int p = 0; p <= n; ++p) {
      for (int q = 0; q + 2 <= n; ++q) {
        auto dd = compose(dbar_symbol(ctx, p, q + 1), dbar_symbol(ctx, p, q));
        CHECK(reliable_norm(dd) <= 1e-10);
      }
      for (int q = 0; q < n; ++q) {
        auto d = dbar_symbol(ctx, p, q);
        CHECK(d.order() == 1);
        CHECK(reliable_norm(d) > 0.1);
        auto blk = d.block(0, 0).with_reliable_level(d.reliable_level());
        CHECK(reliable_distance(d.adjoint().block(0, 0), adjoint_symbol(blk)) <= 1e-15);
      }
    }
    CHECK_THROWS_AS(dbar_symbol(ctx, 0, n), std::out_of_range);
  }
  // n=1, (0,0): the quantized Z̄_1; μ=+1 gives i·a/√2, μ=−1 gives i·a†/√2
  auto ctx = make_kohn_context(1, 6);
  auto d = dbar_symbol(ctx, 0, 0);
  auto a = annihilation(*ctx.trunc, 0);
  CHECK((d.sector(1) - cplx(0, 1 / std::sqrt(2.0)) * a).cwiseAbs().maxCoeff() <= 1e-15);
  CHECK((d.sector(-1) - cplx(0, 1 / std::sqrt(2.0)) * a.adjoint()).cwiseAbs().maxCoeff() <= 1e-15);
}

TEST_CASE("Kohn Laplacian") {
  for (int n : {1, 2}) {
    auto ctx = make_kohn_context(n, 8);
    for (int p = 0; p <= n; ++p) {
      for (int q = 0; q <= n; ++q) {
        auto box = kohn_laplacian_symbol(ctx, p, q);
        CHECK(box.order() == 2);
        CHECK(min_eigenvalue(box) >= -1e-10);
        CHECK((box.reliable_block(1) - box.reliable_block(1).adjoint()).cwiseAbs().maxCoeff() <= 1e-12);
        auto P = kernel_projector(box);
        CHECK(reliable_distance(compose(box, P), compose(P, box)) <= 1e-10);
      }
    }
    // scalar case: □ = ½·folland_stein(|c|n/2)
    for (auto conv : {FrameConvention::section2(), FrameConvention::section5()}) {
      auto c2 = make_kohn_context(n, 8, conv);
      auto box = kohn_laplacian_symbol(c2, 0, 0);
      const double c = std::abs(conv.bracket_constant());
      auto fs = folland_stein_symbol({c * n / 2.0, n}, c2.trunc, conv);
      CHECK(reliable_distance(box.block(0, 0), cplx(kKohnConventionConstant) * fs) <= 1e-12);
    }
  }
}

TEST_CASE("Y condition") {
  CHECK(y_condition(1, {2, 0}, 2));
  CHECK_FALSE(y_condition(0, {2, 0}, 2));
  CHECK_FALSE(y_condition(2, {2, 0}, 2));
  for (int q = 0; q <= 3; ++q) CHECK(y_condition(q, {2, 1}, 3) == (q == 0 || q == 3));
  CHECK_FALSE(y_condition(0, {1, 0}, 1));
  CHECK_FALSE(y_condition(1, {1, 0}, 1));
}

TEST_CASE("parametrix existence agrees with Y(q)") {
  for (int n : {1, 2}) {
    auto ctx = make_kohn_context(n, 8);
    for (int p = 0; p <= n; ++p) {
      for (int q = 0; q <= n; ++q) {
        auto w = parametrix_exists(ctx, p, q);
        CHECK(w.exists == y_condition(q, model_signature(n), n));
        if (w.exists) {
          CHECK(w.residual <= 1e-8);
        } else {
          // q = 0 is singular in μ=+1, q = n in μ=−1
          CHECK(w.plus_singular == (q == 0));
          CHECK(w.minus_singular == (q == n));
        }
      }
    }
  }
}

TEST_CASE("Szegő projections and the Hodge identity") {
  for (int n : {1, 2}) {
    auto ctx = make_kohn_context(n, 8);
    for (int p = 0; p <= n; ++p) {
      for (int q = 0; q <= n; ++q) {
        auto sp = szego_projection_symbols(ctx, p, q);
        CHECK(sp.identity_residual <= 1e-8);
        CHECK(sp.partial_inverse_residual <= 1e-8);
        CHECK(sp.orthogonality_residual <= 1e-8);
        const int fiber = PQFiber(n, p, q).dim();
        CHECK(sp.rank_plus == (q == 0 ? fiber : 0));
        CHECK(sp.rank_minus == (q == n ? fiber : 0));
      }
    }
  }
  auto ctx = make_kohn_context(2, 8);
  CHECK_THROWS_AS(szego_projection_symbols(ctx, 0, 1, true), PreconditionError);
  CHECK_NOTHROW(szego_projection_symbols(ctx, 0, 1, false));
  auto ctx3 = make_kohn_context(1, 6);
  auto s00 = szego_projection_symbols(ctx3, 0, 0, false);
  CHECK(reliable_distance(s00.S.block(0, 0), szego_symbol_level(ctx3, 0).with_reliable_level(s00.S.reliable_level())) <=
        1e-10);
}

TEST_CASE("Szegő symbols s_k") {
  for (int n : {1, 2}) {
    auto ctx = make_kohn_context(n, n == 1 ? 16 : 8);
    std::vector<HomogeneousSymbol> s;
    for (int k = 0; k <= 3; ++k) {
      s.push_back(szego_symbol_level(ctx, k));
      const auto P = s.back().reliable_block(1);
      CHECK(std::abs(P.trace().real() - binomial(k + n - 1, n - 1)) <= 1e-10);
      CHECK(s.back().reliable_block(-1).norm() <= 1e-12);
      CHECK(reliable_distance(star(s.back(), s.back()), s.back()) <= 1e-10);
      CHECK(reliable_distance(adjoint_symbol(s.back()), s.back()) <= 1e-10);
    }
    for (int k = 0; k <= 3; ++k)
      for (int j = 0; j <= 3; ++j)
        if (j != k) CHECK(reliable_norm(star(s[k], s[j])) <= 1e-10);
  }
  // uniqueness: N versus 2N on the common block
  auto small = make_kohn_context(1, 10), large = make_kohn_context(1, 20);
  for (int k = 0; k <= 2; ++k) {
    auto a = szego_symbol_level(small, k), b = szego_symbol_level(large, k);
    const int sz = a.reliable_size();
    for (int mu : {1, -1})
      CHECK((a.reliable_block(mu) - b.sector(mu).topLeftCorner(sz, sz)).cwiseAbs().maxCoeff() <= 1e-8);
  }
}

TEST_CASE("sector flip and conformal rescaling") {
  for (int n : {1, 2}) {
    auto ctx = make_kohn_context(n, n == 1 ? 16 : 8);
    for (int k = 0; k <= 2; ++k) {
      auto r = sector_flip_check(ctx, k, 4.0);
      CHECK(r.flip_ok);
      CHECK(r.conformal_ok);
    }
  }
}
