#include "heis/hodge.hpp"

#include <algorithm>
#include <stdexcept>

namespace heis {

namespace {

// Sign of the permutation sorting v.
int sort_sign(std::vector<int> v) {
  int sign = 1;
  for (size_t i = 0; i < v.size(); ++i)
    for (size_t j = i + 1; j < v.size(); ++j)
      if (v[i] > v[j]) sign = -sign;
      else if (v[i] == v[j]) return 0;
  return sign;
}

// conj(θ^I ∧ θ̄^J) = sign · monomial with θ and θ̄ exchanged.
std::pair<std::vector<int>, int> conjugate_monomial(const std::vector<int>& m, int n) {
  std::vector<int> swapped;
  for (int i : m) swapped.push_back(i < n ? i + n : i - n);
  const int sign = sort_sign(swapped);
  std::sort(swapped.begin(), swapped.end());
  return {swapped, sign};
}

// α ∧ β as a multiple of θ¹∧θ̄¹∧…∧θⁿ∧θ̄ⁿ.
int top_coefficient(const std::vector<int>& a, const std::vector<int>& b, int n) {
  std::vector<int> cat = a;
  cat.insert(cat.end(), b.begin(), b.end());
  if (static_cast<int>(cat.size()) != 2 * n) return 0;
  std::vector<int> paired;
  for (int j = 0; j < n; ++j) {
    paired.push_back(j);
    paired.push_back(n + j);
  }
  // cat = sign(cat)·e_{sorted}, paired = sign(paired)·e_{sorted}
  return sort_sign(cat) * sort_sign(paired);
}

Eigen::MatrixXcd star_matrix(int n, int p, int q, cplx phase) {
  PQFiber src(n, p, q), dst(n, n - q, n - p);
  Eigen::MatrixXd W(src.dim(), dst.dim());
  for (int i = 0; i < src.dim(); ++i)
    for (int k = 0; k < dst.dim(); ++k) {
      auto [cm, sign] = conjugate_monomial(dst.monomial(k), n);
      W(i, k) = sign * top_coefficient(src.monomial(i), cm, n);
    }
  // Σ_K conj(S_KJ) W(I, K) = δ_IJ·phase
  return std::conj(phase) * W.inverse().cast<cplx>();
}

FormSymbol fiber_symbol(const Fiber& in, const Fiber& out, const Eigen::MatrixXcd& F, const KohnContext& ctx,
                        int level) {
  return FormSymbol::tensor(in, out, F, identity_symbol(ctx.trunc, ctx.conv)).with_reliable_level(level);
}

}  // namespace

HodgeData hodge_data(int n) {
  if (n < 1) throw std::invalid_argument("hodge_data: n must be >= 1");
  for (cplx phase : {cplx(1, 0), cplx(0, 1), cplx(-1, 0), cplx(0, -1)}) {
    HodgeData h;
    h.n = n;
    h.volume_phase = phase;
    bool ok = true;
    for (int p = 0; p <= n && ok; ++p)
      for (int q = 0; q <= n && ok; ++q) h.star[{p, q}] = star_matrix(n, p, q, phase);
    for (int p = 0; p <= n && ok; ++p)
      for (int q = 0; q <= n && ok; ++q) {
        const Eigen::MatrixXcd sq = h.star[{n - q, n - p}] * h.star[{p, q}];
        const double sign = (p + q) % 2 == 0 ? 1.0 : -1.0;
        ok = (sq - sign * Eigen::MatrixXcd::Identity(sq.rows(), sq.cols())).cwiseAbs().maxCoeff() == 0.0;
      }
    if (!ok) continue;
    for (int p = 0; p <= n; ++p)
      for (int q = 0; q <= n; ++q) {
        PQFiber src(n, p, q), dst(n, q, p);
        Eigen::MatrixXd C = Eigen::MatrixXd::Zero(dst.dim(), src.dim());
        for (int i = 0; i < src.dim(); ++i) {
          auto [cm, sign] = conjugate_monomial(src.monomial(i), n);
          for (int k = 0; k < dst.dim(); ++k)
            if (dst.monomial(k) == cm) C(k, i) = sign;
        }
        h.conjugation[{p, q}] = C;
      }
    for (int q = 0; q <= n; ++q) {
      PQFiber src(n, 0, q), dst(n, n, q);
      Eigen::MatrixXd T = Eigen::MatrixXd::Zero(dst.dim(), src.dim());
      for (int i = 0; i < src.dim(); ++i) {
        std::vector<int> m;
        for (int j = 0; j < n; ++j) m.push_back(j);
        m.insert(m.end(), src.monomial(i).begin(), src.monomial(i).end());
        for (int k = 0; k < dst.dim(); ++k)
          if (dst.monomial(k) == m) T(k, i) = 1.0;
      }
      h.tau[q] = T;
    }
    return h;
  }
  throw std::logic_error("hodge_data: no volume phase gives *^2 = (-1)^{p+q}");
}

FormSymbol conjugate_form_symbol(const FormSymbol& P, const Eigen::MatrixXd& C_in, const Eigen::MatrixXd& C_out,
                                 const Fiber& in, const Fiber& out) {
  const int D = P.trunc().size();
  const Eigen::VectorXd par = parity_diagonal(P.trunc());
  auto lift = [&](const Eigen::MatrixXd& C) {
    Eigen::MatrixXcd K = Eigen::MatrixXcd::Zero(C.rows() * D, C.cols() * D);
    for (int r = 0; r < C.rows(); ++r)
      for (int c = 0; c < C.cols(); ++c)
        if (C(r, c) != 0.0) K.block(r * D, c * D, D, D) = (C(r, c) * par).asDiagonal().toDenseMatrix().cast<cplx>();
    return K;
  };
  // conj(α) ∈ fiber_in(P) = C_in⁻¹-image; C_in is a signed permutation, so C_in⁻¹ = C_inᵀ
  const Eigen::MatrixXcd Kin = lift(C_in.transpose()), Kout = lift(C_out);
  Eigen::MatrixXcd plus = Kout * P.sector(-1).conjugate() * Kin;
  Eigen::MatrixXcd minus = Kout * P.sector(1).conjugate() * Kin;
  return FormSymbol(in, out, P.order(), plus, minus, P.trunc_ptr(), P.convention(), P.reliable_level());
}

HodgeReport hodge_tau_checks(int n, int N, const FrameConvention& conv) {
  HodgeReport rep;
  rep.n = n;
  const HodgeData h = hodge_data(n);
  rep.volume_phase = h.volume_phase;
  rep.star_square_exact = true;
  for (const auto& [pq, S] : h.star)
    rep.unitarity = std::max(rep.unitarity,
                             (S.adjoint() * S - Eigen::MatrixXcd::Identity(S.cols(), S.cols())).cwiseAbs().maxCoeff());

  const KohnContext ctx = make_kohn_context(n, N, conv);
  auto fib = [&](int p, int q) { return PQFiber(n, p, q).descriptor(); };
  for (int p = 0; p <= n; ++p) {
    for (int q = 0; q < n; ++q) {
      const FormSymbol dbar = dbar_symbol(ctx, p, q);
      const int level = dbar.reliable_level() - 1;
      // ∂̄*_{p,q}: Λ^{p,q+1} → Λ^{p,q} against −*∂*
      auto s1 = fiber_symbol(fib(p, q + 1), fib(n - q - 1, n - p), h.star.at({p, q + 1}), ctx, level);
      auto s2 = fiber_symbol(fib(n - q, n - p), fib(p, q), h.star.at({n - q, n - p}), ctx, level);
      auto rhs = cplx(-1.0) * compose(s2, compose(del_symbol(ctx, n - q - 1, n - p), s1));
      rep.adjoint_formula = std::max(rep.adjoint_formula, reliable_distance(dbar.adjoint(), rhs));
      // ∂̄ = C ∂ C
      auto conj = conjugate_form_symbol(del_symbol(ctx, q, p), h.conjugation.at({p, q}),
                                        h.conjugation.at({q + 1, p}), fib(p, q), fib(p, q + 1));
      rep.conjugation = std::max(rep.conjugation, reliable_distance(dbar, conj));
    }
  }
  const double sign = n % 2 == 0 ? 1.0 : -1.0;
  for (int q = 0; q < n; ++q) {
    const FormSymbol dbar_n = dbar_symbol(ctx, n, q);
    const int level = dbar_n.reliable_level();
    auto t_in = fiber_symbol(fib(0, q), fib(n, q), h.tau.at(q), ctx, level);
    auto t_out_inv = fiber_symbol(fib(n, q + 1), fib(0, q + 1), h.tau.at(q + 1).transpose(), ctx, level);
    auto lhs = compose(t_out_inv, compose(dbar_n, t_in));
    rep.tau_intertwining =
        std::max(rep.tau_intertwining, reliable_distance(lhs, cplx(sign) * dbar_symbol(ctx, 0, q)));
  }

  const auto S00 = szego_projection_symbols(ctx, 0, 0).S;
  const auto del = del_symbol(ctx, 0, 0);
  const auto pi_del = kernel_projector(compose(del.adjoint(), del));
  rep.conjugate_projection = reliable_distance(pi_del.block(0, 0), conjugate_symbol(S00.block(0, 0)));
  const auto S0n = szego_projection_symbols(ctx, 0, n).S;
  for (const HomogeneousSymbol& s : {S00.block(0, 0), pi_del.block(0, 0), S0n.block(0, 0)})
    rep.flat_residues.push_back(res(SymbolExpansion{{s}}));

  bool zero = true;
  for (const auto& r : rep.flat_residues) zero = zero && r.value == cplx(0.0);
  rep.passed = rep.star_square_exact && rep.unitarity <= rep.tolerance && rep.adjoint_formula <= rep.tolerance &&
               rep.conjugation <= rep.tolerance && rep.tau_intertwining <= rep.tolerance &&
               rep.conjugate_projection <= rep.tolerance && zero;
  return rep;
}

}  // namespace heis
