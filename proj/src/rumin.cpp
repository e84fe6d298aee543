#include "heis/rumin.hpp"

#include <cmath>
#include <optional>
#include <stdexcept>

namespace heis {

namespace {

void check_degree(int n, int k) {
  if (n < 1) throw std::invalid_argument("horizontal forms need n >= 1");
  if (k < 0 || k > 2 * n) throw std::out_of_range("horizontal degree out of range");
}

// Coordinates of the complex coframe vectors in the real coframe.
Eigen::MatrixXcd coframe(int n) {
  Eigen::MatrixXcd U = Eigen::MatrixXcd::Zero(2 * n, 2 * n);
  const double s = 1.0 / std::sqrt(2.0);
  for (int j = 0; j < n; ++j) {
    U(j, j) = s;
    U(n + j, j) = cplx(0, s);
    U(j, n + j) = s;
    U(n + j, n + j) = cplx(0, -s);
  }
  return U;
}

Eigen::MatrixXcd basis_change(int n, int k) {
  ExteriorAlgebra A(2 * n);
  const Eigen::MatrixXcd U = coframe(n);
  Eigen::MatrixXcd C(A.dim(k), A.dim(k));
  const auto& basis = A.basis(k);
  for (size_t col = 0; col < basis.size(); ++col) {
    Eigen::VectorXcd v = Eigen::VectorXcd::Ones(1);
    int deg = 0;
    for (auto it = basis[col].rbegin(); it != basis[col].rend(); ++it, ++deg) {
      Eigen::MatrixXcd W = Eigen::MatrixXcd::Zero(A.dim(deg + 1), A.dim(deg));
      for (int a = 0; a < 2 * n; ++a) W += U(a, *it) * A.wedge(a, deg).cast<cplx>();
      v = W * v;
    }
    C.col(col) = v;
  }
  return C;
}

// Orthonormal basis of the kernel of M restricted to each bidegree block.
Eigen::MatrixXcd graded_kernel(const Eigen::MatrixXcd& M, const std::vector<int>& offsets, int cols,
                               std::vector<int>& out_offsets) {
  std::vector<Eigen::VectorXcd> vecs;
  out_offsets.clear();
  for (int o = -2 * static_cast<int>(cols + 1); o <= 2 * static_cast<int>(cols + 1); ++o) {
    std::vector<int> idx;
    for (int i = 0; i < cols; ++i)
      if (offsets[i] == o) idx.push_back(i);
    if (idx.empty()) continue;
    const int m = static_cast<int>(idx.size());
    Eigen::MatrixXcd G = Eigen::MatrixXcd::Zero(m, m);
    if (M.rows() > 0) {
      Eigen::MatrixXcd sub = M(Eigen::all, idx);
      G = sub.adjoint() * sub;
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(G);
    const double scale = std::max(1.0, es.eigenvalues().cwiseAbs().maxCoeff());
    for (int e = 0; e < m; ++e) {
      if (std::abs(es.eigenvalues()(e)) > 1e-10 * scale) continue;
      Eigen::VectorXcd v = Eigen::VectorXcd::Zero(cols);
      for (int i = 0; i < m; ++i) v(idx[i]) = es.eigenvectors()(i, e);
      vecs.push_back(v);
      out_offsets.push_back(o);
    }
  }
  Eigen::MatrixXcd V(cols, static_cast<int>(vecs.size()));
  for (size_t i = 0; i < vecs.size(); ++i) V.col(i) = vecs[i];
  return V;
}

}  // namespace

Eigen::MatrixXd real_eps(int n, int k, const FrameConvention& conv) {
  check_degree(n, k);
  ExteriorAlgebra A(2 * n);
  Eigen::MatrixXd E = Eigen::MatrixXd::Zero(A.dim(k + 2), A.dim(k));
  if (k + 2 > 2 * n) return E;
  for (int j = 0; j < n; ++j) E += A.wedge(j, k + 1) * A.wedge(n + j, k);
  return std::abs(conv.bracket_constant()) * E;
}

HorizontalFiber::HorizontalFiber(int n, int k, const FrameConvention& conv) : n_(n), k_(k), conv_(conv) {
  check_degree(n, k);
  ExteriorAlgebra A(2 * n);
  for (const auto& s : A.basis(k)) {
    int p = 0, q = 0;
    for (int i : s) (i < n ? p : q) += 1;
    offsets_.push_back(q - p);
  }
  basis_change_ = basis_change(n, k);
  if (k + 2 <= 2 * n)
    eps_ = basis_change(n, k + 2).adjoint() * real_eps(n, k, conv).cast<cplx>() * basis_change_;
  else
    eps_ = Eigen::MatrixXcd::Zero(0, dim());
  if (k >= 2)
    iota_ = basis_change(n, k - 2).adjoint() * real_eps(n, k - 2, conv).transpose().cast<cplx>() * basis_change_;
  else
    iota_ = Eigen::MatrixXcd::Zero(0, dim());
}

Fiber HorizontalFiber::descriptor() const {
  ExteriorAlgebra A(2 * n_);
  Fiber f{"horizontal(" + std::to_string(n_) + "," + std::to_string(k_) + ")", dim(), {}, offsets_};
  for (const auto& s : A.basis(k_)) {
    std::string label = s.empty() ? "1" : "";
    for (size_t i = 0; i < s.size(); ++i)
      label += (i ? "^" : "") + std::string(s[i] < n_ ? "phi" : "phib") + std::to_string(s[i] % n_ + 1);
    f.labels.push_back(label);
  }
  return f;
}

Fiber RuminSpace::descriptor() const {
  Fiber f{"rumin(" + std::to_string(n) + "," + std::to_string(k) + "," + (side == RuminSide::lambda1 ? "1" : "2") +
              ")",
          dim(),
          {},
          offsets};
  for (int i = 0; i < dim(); ++i) f.labels.push_back("v" + std::to_string(i));
  return f;
}

RuminSpace rumin_space(int n, int k, RuminSide side, const FrameConvention& conv) {
  HorizontalFiber h(n, k, conv);
  std::vector<int> offs(h.dim());
  for (int i = 0; i < h.dim(); ++i) offs[i] = h.offset(i);
  RuminSpace r{n, k, side, {}, {}, {}};
  r.basis = graded_kernel(side == RuminSide::lambda1 ? h.iota() : h.eps(), offs, h.dim(), r.offsets);
  r.projector = r.basis * r.basis.adjoint();
  return r;
}

RuminContext make_rumin_context(int n, int N, const FrameConvention& conv) {
  if (N <= n) throw std::invalid_argument("make_rumin_context: need N > n");
  return {n, make_truncation(n, N), conv};
}

namespace {

FormSymbol graded(const FormSymbol& s, const RuminContext& ctx) {
  return s.with_reliable_level(ctx.reliable_level()).with_grading(true);
}

FormSymbol fiber_map(const RuminContext& ctx, const Fiber& in, const Fiber& out, const Eigen::MatrixXcd& F) {
  return graded(FormSymbol::tensor(in, out, F, identity_symbol(ctx.trunc, ctx.conv)), ctx);
}

Fiber horizontal(const RuminContext& ctx, int k) { return HorizontalFiber(ctx.n, k, ctx.conv).descriptor(); }

FormSymbol restrict(const RuminContext& ctx, const FormSymbol& op, const RuminSpace& in, const RuminSpace& out) {
  auto embed_in = fiber_map(ctx, in.descriptor(), op.fiber_in(), in.basis);
  auto project_out = fiber_map(ctx, op.fiber_out(), out.descriptor(), out.basis.adjoint());
  return compose(project_out, compose(op, embed_in));
}

}  // namespace

FormSymbol db_symbol(const RuminContext& ctx, int k) {
  check_degree(ctx.n, k);
  if (k >= 2 * ctx.n) throw std::out_of_range("db_symbol: k must be <= 2n-1");
  ExteriorAlgebra A(2 * ctx.n);
  HorizontalFiber src(ctx.n, k, ctx.conv), dst(ctx.n, k + 1, ctx.conv);
  const Fiber in = src.descriptor(), out = dst.descriptor();
  FormSymbol d = graded(FormSymbol::zero(in, out, 1, ctx.trunc, ctx.conv), ctx);
  for (int a = 0; a < 2 * ctx.n; ++a) {
    Eigen::MatrixXcd F = dst.change_of_basis().adjoint() * A.wedge(a, k).cast<cplx>() * src.change_of_basis();
    d = d + graded(FormSymbol::tensor(in, out, F, cplx(0, 1) * field_symbol(a + 1, ctx.trunc, ctx.conv)), ctx);
  }
  return d;
}

FormSymbol lie_x0_symbol(const RuminContext& ctx, int k) {
  const Fiber f = horizontal(ctx, k);
  return graded(FormSymbol::tensor(f, f, Eigen::MatrixXcd::Identity(f.dim, f.dim),
                                   cplx(0, 1) * field_symbol(0, ctx.trunc, ctx.conv)),
                ctx);
}

FormSymbol eps_symbol(const RuminContext& ctx, int k) {
  HorizontalFiber h(ctx.n, k, ctx.conv);
  if (k + 2 > 2 * ctx.n) throw std::out_of_range("eps_symbol: k must be <= 2n-2");
  return fiber_map(ctx, h.descriptor(), horizontal(ctx, k + 2), h.eps());
}

RuminSpace rumin_domain(const RuminContext& ctx, int k) {
  return rumin_space(ctx.n, k, k <= ctx.n - 1 ? RuminSide::lambda1 : RuminSide::lambda2, ctx.conv);
}

RuminSpace rumin_codomain(const RuminContext& ctx, int k) {
  return rumin_space(ctx.n, k + 1, k <= ctx.n - 1 ? RuminSide::lambda1 : RuminSide::lambda2, ctx.conv);
}

FormSymbol d_R(const RuminContext& ctx, int k) {
  check_degree(ctx.n, k);
  if (k >= 2 * ctx.n) throw std::out_of_range("d_R: k must be <= 2n-1");
  // For k <= n−1 the projection π₁ is absorbed by projecting onto the Λ₁ basis.
  return restrict(ctx, db_symbol(ctx, k), rumin_domain(ctx, k), rumin_codomain(ctx, k));
}

FormSymbol D_R_full(const RuminContext& ctx) {
  const int n = ctx.n;
  HorizontalFiber low(n, n - 1, ctx.conv);
  const Eigen::MatrixXcd& E = low.eps();
  if (E.rows() != E.cols()) throw std::logic_error("D_R: middle eps block is not square");
  Eigen::FullPivLU<Eigen::MatrixXcd> lu(E);
  if (!lu.isInvertible()) throw std::runtime_error("D_R: eps(dtheta) is not invertible between degrees n-1 and n+1");
  Eigen::MatrixXcd Einv = lu.inverse();
  auto einv = fiber_map(ctx, horizontal(ctx, n + 1), horizontal(ctx, n - 1), Einv);
  return lie_x0_symbol(ctx, n) + compose(db_symbol(ctx, n - 1), compose(einv, db_symbol(ctx, n)));
}

FormSymbol D_R_middle(const RuminContext& ctx) {
  const int n = ctx.n;
  return restrict(ctx, D_R_full(ctx), rumin_space(n, n, RuminSide::lambda1, ctx.conv),
                  rumin_space(n, n, RuminSide::lambda2, ctx.conv));
}

std::pair<double, double> contact_laplacian_weights(int n, int k) {
  if (k < n) return {double(n - k), double(n - k + 1)};
  if (k > n) return {double(k - n + 1), double(k - n)};
  throw std::invalid_argument("contact_laplacian_weights: degree n uses the fourth-order pair");
}

std::pair<double, double> alternative_upper_weights(int n, int k) { return {double(k - n - 1), double(k - n)}; }

namespace {

FormSymbol weighted_laplacian(const RuminContext& ctx, int k, double a, double b) {
  const int n = ctx.n;
  std::optional<FormSymbol> out;
  if (k >= 1 && a != 0.0) {
    auto d = d_R(ctx, k - 1);
    out = cplx(a) * compose(d, d.adjoint());
  }
  if (k <= 2 * n - 1 && b != 0.0) {
    auto d = d_R(ctx, k);
    auto t = cplx(b) * compose(d.adjoint(), d);
    out = out ? *out + t : t;
  }
  if (!out) {
    auto d = k >= 1 ? d_R(ctx, k - 1) : d_R(ctx, k);
    const Fiber f = k >= 1 ? d.fiber_out() : d.fiber_in();
    out = graded(FormSymbol::zero(f, f, 2, ctx.trunc, ctx.conv), ctx);
  }
  return *out;
}

}  // namespace

FormSymbol weighted_contact_laplacian(const RuminContext& ctx, int k, double a, double b) {
  check_degree(ctx.n, k);
  if (k == ctx.n) throw std::invalid_argument("weighted_contact_laplacian: degree n is fourth order");
  return weighted_laplacian(ctx, k, a, b);
}

FormSymbol contact_laplacian(const RuminContext& ctx, int k, int j) {
  const int n = ctx.n;
  check_degree(n, k);
  if (k != n) {
    auto [a, b] = contact_laplacian_weights(n, k);
    return weighted_laplacian(ctx, k, a, b);
  }
  const auto D = D_R_middle(ctx);
  if (j == 1) {
    auto d = d_R(ctx, n - 1);
    auto dd = compose(d, d.adjoint());
    return compose(dd, dd) + compose(D.adjoint(), D);
  }
  if (j == 2) {
    auto d = d_R(ctx, n);
    auto dd = compose(d.adjoint(), d);
    return compose(D, D.adjoint()) + compose(dd, dd);
  }
  throw std::invalid_argument("contact_laplacian: degree n needs j = 1 or 2");
}

namespace {

RuminProjection finish(const std::string& name, int k, const FormSymbol& value, const FormSymbol& op) {
  RuminProjection r{name, k, value};
  auto oracle = kernel_projector(compose(op.adjoint(), op));
  r.residual = reliable_distance(value, oracle);
  r.idempotence = reliable_distance(compose(value, value), value);
  r.self_adjointness = reliable_distance(value.adjoint(), value);
  return r;
}

}  // namespace

RuminProjections rumin_projections(const RuminContext& ctx) {
  const int n = ctx.n;
  std::vector<RuminProjection> projs;
  for (int k = 0; k <= 2 * n - 1; ++k) {
    const auto d = d_R(ctx, k);
    const auto I = FormSymbol::identity(d.fiber_in(), ctx.trunc, ctx.conv).with_reliable_level(ctx.reliable_level()).with_grading(true);
    const std::string name = "Pi0(d_R," + std::to_string(k) + ")";
    if (k == n - 1) {
      auto G = spectral_pseudo_inverse(contact_laplacian(ctx, n, 1));
      auto value = I - compose(d.adjoint(), compose(d, compose(d.adjoint(), compose(G, d))));
      projs.push_back(finish(name, k, value, d));
      continue;
    }
    const double a = contact_laplacian_weights(n, k + 1).first;
    auto G = spectral_pseudo_inverse(contact_laplacian(ctx, k + 1));
    auto core = compose(d.adjoint(), compose(G, d));
    auto proj = finish(name, k, I - cplx(a) * core, d);
    if (k <= n - 2) {
      proj.reciprocal_residual = reliable_distance(I - cplx(1.0 / a) * core, proj.value);
    } else if (k >= n + 1) {
      auto [pa, pb] = alternative_upper_weights(n, k + 1);
      auto dn = d_R(ctx, k + 1 <= 2 * n - 1 ? k + 1 : k);
      auto lap = cplx(pa) * compose(d, d.adjoint());
      if (k + 1 <= 2 * n - 1 && pb != 0.0) lap = lap + cplx(pb) * compose(dn.adjoint(), dn);
      auto Gp = spectral_pseudo_inverse(lap);
      auto alt = I - cplx(1.0 / (k - n)) * compose(d.adjoint(), compose(Gp, d));
      proj.reciprocal_residual = reliable_distance(alt, proj.value);
    }
    projs.push_back(proj);
  }
  const auto D = D_R_middle(ctx);
  const auto I = FormSymbol::identity(D.fiber_in(), ctx.trunc, ctx.conv).with_reliable_level(ctx.reliable_level()).with_grading(true);
  auto G = spectral_pseudo_inverse(contact_laplacian(ctx, n, 2));
  return {projs, finish("Pi0(D_R)", n, I - compose(D.adjoint(), compose(G, D)), D)};
}

}  // namespace heis
