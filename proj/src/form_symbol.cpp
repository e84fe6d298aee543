#include "heis/form_symbol.hpp"

#include <algorithm>
#include <cmath>

namespace heis {

FormSymbol::FormSymbol(Fiber in, Fiber out, int order, Eigen::MatrixXcd plus, Eigen::MatrixXcd minus,
                       TruncationPtr trunc, FrameConvention conv, int reliable_level)
    : in_(std::move(in)),
      out_(std::move(out)),
      order_(order),
      plus_(std::move(plus)),
      minus_(std::move(minus)),
      trunc_(std::move(trunc)),
      conv_(conv),
      reliable_level_(reliable_level) {
  if (!trunc_) throw std::invalid_argument("FormSymbol: missing truncation");
  reliable_level_ = std::min(reliable_level_, trunc_->N());
  const int D = trunc_->size();
  for (const auto* m : {&plus_, &minus_})
    if (m->rows() != out_.dim * D || m->cols() != in_.dim * D)
      throw std::invalid_argument("FormSymbol: sector shape does not match fibers");
}

FormSymbol FormSymbol::tensor(const Fiber& in, const Fiber& out, const Eigen::MatrixXcd& F,
                              const HomogeneousSymbol& s) {
  if (F.rows() != out.dim || F.cols() != in.dim) throw std::invalid_argument("FormSymbol::tensor: fiber map shape");
  auto kron = [&](const Eigen::MatrixXcd& M) {
    const int D = static_cast<int>(M.rows());
    Eigen::MatrixXcd K = Eigen::MatrixXcd::Zero(F.rows() * D, F.cols() * D);
    for (int r = 0; r < F.rows(); ++r)
      for (int c = 0; c < F.cols(); ++c)
        if (F(r, c) != cplx(0.0)) K.block(r * D, c * D, D, D) = F(r, c) * M;
    return K;
  };
  return FormSymbol(in, out, s.order(), kron(s.plus()), kron(s.minus()), s.trunc_ptr(), s.convention(),
                    s.reliable_level());
}

FormSymbol FormSymbol::identity(const Fiber& f, const TruncationPtr& t, const FrameConvention& conv) {
  return tensor(f, f, Eigen::MatrixXcd::Identity(f.dim, f.dim), identity_symbol(t, conv));
}

FormSymbol FormSymbol::zero(const Fiber& in, const Fiber& out, int order, const TruncationPtr& t,
                            const FrameConvention& conv) {
  const int D = t->size();
  Eigen::MatrixXcd Z = Eigen::MatrixXcd::Zero(out.dim * D, in.dim * D);
  return FormSymbol(in, out, order, Z, Z, t, conv, t->N());
}

const Eigen::MatrixXcd& FormSymbol::sector(int mu) const {
  if (mu == 1) return plus_;
  if (mu == -1) return minus_;
  throw std::invalid_argument("FormSymbol::sector: mu must be +1 or -1");
}

HomogeneousSymbol FormSymbol::block(int r, int c) const {
  if (r < 0 || r >= out_.dim || c < 0 || c >= in_.dim) throw std::out_of_range("FormSymbol::block");
  const int D = trunc_->size();
  return HomogeneousSymbol(order_, plus_.block(r * D, c * D, D, D), minus_.block(r * D, c * D, D, D), trunc_, conv_,
                           reliable_level_);
}

std::vector<int> FormSymbol::reliable_indices(const Fiber& fiber, int mu) const {
  const int D = trunc_->size();
  std::vector<int> idx;
  for (int f = 0; f < fiber.dim; ++f) {
    const int limit = graded_ ? reliable_level_ - mu * fiber.offset(f) : reliable_level_;
    const int b = trunc_->block_size(limit);
    for (int i = 0; i < b; ++i) idx.push_back(f * D + i);
  }
  return idx;
}

Eigen::MatrixXcd FormSymbol::reliable_block(int mu) const {
  const auto rows = reliable_indices(out_, mu), cols = reliable_indices(in_, mu);
  return sector(mu)(rows, cols);
}

FormSymbol FormSymbol::with_reliable_level(int level) const {
  FormSymbol out(in_, out_, order_, plus_, minus_, trunc_, conv_, level);
  out.graded_ = graded_;
  return out;
}

FormSymbol FormSymbol::with_grading(bool graded) const {
  FormSymbol out = *this;
  out.graded_ = graded;
  return out;
}

FormSymbol FormSymbol::adjoint() const {
  FormSymbol out(out_, in_, order_, plus_.adjoint(), minus_.adjoint(), trunc_, conv_, reliable_level_);
  out.graded_ = graded_;
  return out;
}

namespace {

void require_compatible(const FormSymbol& a, const FormSymbol& b) {
  if (!(a.trunc() == b.trunc())) throw SymbolMismatch("form symbols use different truncations");
  if (!(a.convention() == b.convention())) throw SymbolMismatch("form symbols use different conventions");
}

}  // namespace

FormSymbol compose(const FormSymbol& a, const FormSymbol& b) {
  require_compatible(a, b);
  if (!(a.fiber_in() == b.fiber_out()))
    throw SymbolMismatch("compose: fiber mismatch " + a.fiber_in().kind + " vs " + b.fiber_out().kind);
  const bool graded = a.graded() && b.graded();
  int rel = std::min(a.reliable_level(), b.reliable_level());
  if (!graded) rel -= std::max({a.order(), b.order(), 0});
  FormSymbol out(b.fiber_in(), a.fiber_out(), a.order() + b.order(), a.sector(1) * b.sector(1),
                 a.sector(-1) * b.sector(-1), a.trunc_ptr(), a.convention(), std::max(rel, -1));
  return out.with_grading(graded);
}

FormSymbol operator+(const FormSymbol& a, const FormSymbol& b) {
  require_compatible(a, b);
  if (!(a.fiber_in() == b.fiber_in()) || !(a.fiber_out() == b.fiber_out()))
    throw SymbolMismatch("cannot add form symbols on different fibers");
  if (a.order() != b.order()) throw SymbolMismatch("cannot add form symbols of different orders");
  FormSymbol out(a.fiber_in(), a.fiber_out(), a.order(), a.sector(1) + b.sector(1), a.sector(-1) + b.sector(-1),
                 a.trunc_ptr(), a.convention(), std::min(a.reliable_level(), b.reliable_level()));
  return out.with_grading(a.graded() && b.graded());
}

FormSymbol operator-(const FormSymbol& a, const FormSymbol& b) { return a + cplx(-1.0) * b; }

FormSymbol operator*(cplx s, const FormSymbol& a) {
  FormSymbol out(a.fiber_in(), a.fiber_out(), a.order(), s * a.sector(1), s * a.sector(-1), a.trunc_ptr(),
                 a.convention(), a.reliable_level());
  return out.with_grading(a.graded());
}

double reliable_distance(const FormSymbol& a, const FormSymbol& b) {
  require_compatible(a, b);
  const int lvl = std::min(a.reliable_level(), b.reliable_level());
  auto aa = a.with_reliable_level(lvl), bb = b.with_reliable_level(lvl);
  double d = 0.0;
  for (int mu : {1, -1}) {
    Eigen::MatrixXcd diff = aa.reliable_block(mu) - bb.reliable_block(mu);
    if (diff.size()) d = std::max(d, diff.cwiseAbs().maxCoeff());
  }
  return d;
}

double reliable_norm(const FormSymbol& a) {
  double s = 0.0;
  for (int mu : {1, -1}) {
    Eigen::MatrixXcd m = a.reliable_block(mu);
    if (m.size() == 0) continue;
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m);
    s = std::max(s, svd.singularValues()(0));
  }
  return s;
}

namespace {

FormSymbol embed(const FormSymbol& shape, int order, const Eigen::MatrixXcd blocks[2], bool swap_fibers) {
  const Fiber& in = swap_fibers ? shape.fiber_out() : shape.fiber_in();
  const Fiber& out = swap_fibers ? shape.fiber_in() : shape.fiber_out();
  const int D = shape.trunc().size();
  Eigen::MatrixXcd full[2];
  for (int s = 0; s < 2; ++s) {
    const int mu = s == 0 ? 1 : -1;
    const auto rows = shape.reliable_indices(out, mu), cols = shape.reliable_indices(in, mu);
    full[s] = Eigen::MatrixXcd::Zero(out.dim * D, in.dim * D);
    full[s](rows, cols) = blocks[s];
  }
  FormSymbol res(in, out, order, full[0], full[1], shape.trunc_ptr(), shape.convention(), shape.reliable_level());
  return res.with_grading(shape.graded());
}

template <class F>
FormSymbol spectral_map(const FormSymbol& p, double tol, int order, F&& f) {
  if (!(p.fiber_in() == p.fiber_out())) throw std::invalid_argument("spectral map requires a square form symbol");
  const double nrm = reliable_norm(p);
  if (tol < 0) tol = 1e-6 * nrm;
  Eigen::MatrixXcd out[2];
  for (int s = 0; s < 2; ++s) {
    Eigen::MatrixXcd blk = p.reliable_block(s == 0 ? 1 : -1);
    if (blk.size() == 0) {
      out[s] = blk;
      continue;
    }
    if ((blk - blk.adjoint()).cwiseAbs().maxCoeff() > 1e-8 * std::max(1.0, nrm))
      throw std::invalid_argument("spectral map requires self-adjoint sectors on the reliable block");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(0.5 * (blk + blk.adjoint()));
    const auto& ev = es.eigenvalues();
    Eigen::VectorXd g(ev.size());
    for (int i = 0; i < ev.size(); ++i) {
      const double a = std::abs(ev(i));
      if (a > tol && a <= 10.0 * tol) throw SpectralGapError(ev(i), tol);
      g(i) = f(ev(i), a <= tol);
    }
    out[s] = es.eigenvectors() * g.asDiagonal() * es.eigenvectors().adjoint();
  }
  return embed(p, order, out, false);
}

}  // namespace

std::variant<FormSymbol, NotInvertible> invert(const FormSymbol& p) {
  if (p.fiber_in().dim != p.fiber_out().dim) throw std::invalid_argument("invert requires a square form symbol");
  NotInvertible fail;
  Eigen::MatrixXcd inv[2];
  for (int s = 0; s < 2; ++s) {
    Eigen::MatrixXcd blk = p.reliable_block(s == 0 ? 1 : -1);
    double smin = 0.0, smax = 0.0;
    if (blk.size()) {
      Eigen::JacobiSVD<Eigen::MatrixXcd> svd(blk, Eigen::ComputeFullU | Eigen::ComputeFullV);
      const auto& sv = svd.singularValues();
      smax = sv(0);
      smin = sv(sv.size() - 1);
      if (smin > kSingularityTolerance * smax)
        inv[s] = svd.matrixV() * sv.cwiseInverse().asDiagonal() * svd.matrixU().adjoint();
    }
    const bool singular = blk.size() == 0 || smin <= kSingularityTolerance * smax;
    (s == 0 ? fail.sigma_min_plus : fail.sigma_min_minus) = smin;
    (s == 0 ? fail.plus_singular : fail.minus_singular) = singular;
  }
  if (fail.plus_singular || fail.minus_singular) return fail;
  return embed(p, -p.order(), inv, true);
}

std::pair<double, double> sector_sigma_min(const FormSymbol& p) {
  double out[2] = {0.0, 0.0};
  for (int s = 0; s < 2; ++s) {
    Eigen::MatrixXcd blk = p.reliable_block(s == 0 ? 1 : -1);
    if (blk.size() == 0) continue;
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(blk);
    out[s] = svd.singularValues()(svd.singularValues().size() - 1);
  }
  return {out[0], out[1]};
}

FormSymbol kernel_projector(const FormSymbol& p, double tol) {
  return spectral_map(p, tol, 0, [](double, bool k) { return k ? 1.0 : 0.0; });
}

FormSymbol spectral_pseudo_inverse(const FormSymbol& p, double tol) {
  return spectral_map(p, tol, -p.order(), [](double e, bool k) { return k ? 0.0 : 1.0 / e; });
}

double min_eigenvalue(const FormSymbol& p) {
  double m = INFINITY;
  for (int mu : {1, -1}) {
    Eigen::MatrixXcd blk = p.reliable_block(mu);
    if (blk.size() == 0) continue;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(0.5 * (blk + blk.adjoint()), Eigen::EigenvaluesOnly);
    m = std::min(m, es.eigenvalues().minCoeff());
  }
  return m;
}

std::pair<double, double> projector_ranks(const FormSymbol& p) {
  return {p.reliable_block(1).trace().real(), p.reliable_block(-1).trace().real()};
}

}  // namespace heis
