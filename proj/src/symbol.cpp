#include "heis/symbol.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "heis/weyl.hpp"

namespace heis {

SpectralGapError::SpectralGapError(double eigenvalue, double tol)
    : std::runtime_error("ill-separated spectrum: eigenvalue " + std::to_string(eigenvalue) +
                         " lies within 10x of projector tolerance " + std::to_string(tol)),
      eigenvalue_(eigenvalue) {}

HomogeneousSymbol::HomogeneousSymbol(int order, Eigen::MatrixXcd plus, Eigen::MatrixXcd minus, TruncationPtr trunc,
                                     FrameConvention conv, int reliable_level)
    : order_(order),
      plus_(std::move(plus)),
      minus_(std::move(minus)),
      trunc_(std::move(trunc)),
      conv_(conv),
      reliable_level_(std::min(reliable_level, trunc_ ? trunc_->N() : 0)) {
  if (!trunc_) throw std::invalid_argument("HomogeneousSymbol: missing truncation");
  const int d = trunc_->size();
  if (plus_.rows() != d || plus_.cols() != d || minus_.rows() != d || minus_.cols() != d)
    throw std::invalid_argument("HomogeneousSymbol: sector matrices must match the truncation");
}

const Eigen::MatrixXcd& HomogeneousSymbol::sector(int mu) const {
  if (mu == 1) return plus_;
  if (mu == -1) return minus_;
  throw std::invalid_argument("HomogeneousSymbol::sector: mu must be +1 or -1");
}

int HomogeneousSymbol::reliable_size() const { return trunc_->block_size(reliable_level_); }

Eigen::MatrixXcd HomogeneousSymbol::reliable_block(int mu) const {
  const int b = reliable_size();
  return sector(mu).topLeftCorner(b, b);
}

HomogeneousSymbol HomogeneousSymbol::with_reliable_level(int level) const {
  return HomogeneousSymbol(order_, plus_, minus_, trunc_, conv_, level);
}

TruncationPtr make_truncation(int n, int N) { return std::make_shared<const FockTruncation>(n, N); }

HomogeneousSymbol identity_symbol(const TruncationPtr& t, const FrameConvention& conv) {
  Eigen::MatrixXcd I = Eigen::MatrixXcd::Identity(t->size(), t->size());
  return HomogeneousSymbol(0, I, I, t, conv, t->N());
}

HomogeneousSymbol field_symbol(int j, const TruncationPtr& t, const FrameConvention& conv) {
  return HomogeneousSymbol(j == 0 ? 2 : 1, quantize_field(j, 1, *t, conv), quantize_field(j, -1, *t, conv), t, conv,
                           t->N());
}

namespace {

void require_compatible(const HomogeneousSymbol& a, const HomogeneousSymbol& b) {
  if (!(a.trunc() == b.trunc())) throw SymbolMismatch("symbols use different truncations");
  if (!(a.convention() == b.convention())) throw SymbolMismatch("symbols use different frame conventions");
}

}  // namespace

HomogeneousSymbol star(const HomogeneousSymbol& p, const HomogeneousSymbol& q) {
  require_compatible(p, q);
  const int rel =
      std::min(p.reliable_level(), q.reliable_level()) - std::max({p.order(), q.order(), 0});
  return HomogeneousSymbol(p.order() + q.order(), p.plus() * q.plus(), p.minus() * q.minus(), p.trunc_ptr(),
                           p.convention(), std::max(rel, -1));
}

HomogeneousSymbol operator+(const HomogeneousSymbol& a, const HomogeneousSymbol& b) {
  require_compatible(a, b);
  if (a.order() != b.order()) throw SymbolMismatch("cannot add symbols of different orders");
  return HomogeneousSymbol(a.order(), a.plus() + b.plus(), a.minus() + b.minus(), a.trunc_ptr(), a.convention(),
                           std::min(a.reliable_level(), b.reliable_level()));
}

HomogeneousSymbol operator-(const HomogeneousSymbol& a, const HomogeneousSymbol& b) { return a + cplx(-1.0) * b; }

HomogeneousSymbol operator*(cplx s, const HomogeneousSymbol& a) {
  return HomogeneousSymbol(a.order(), s * a.plus(), s * a.minus(), a.trunc_ptr(), a.convention(), a.reliable_level());
}

double reliable_distance(const HomogeneousSymbol& a, const HomogeneousSymbol& b) {
  require_compatible(a, b);
  const int b_size = a.trunc().block_size(std::min(a.reliable_level(), b.reliable_level()));
  if (b_size == 0) return 0.0;
  double d = 0.0;
  for (int mu : {1, -1})
    d = std::max(d, (a.sector(mu) - b.sector(mu)).topLeftCorner(b_size, b_size).cwiseAbs().maxCoeff());
  return d;
}

double reliable_norm(const HomogeneousSymbol& a) {
  if (a.reliable_size() == 0) return 0.0;
  double s = 0.0;
  for (int mu : {1, -1}) {
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(a.reliable_block(mu));
    s = std::max(s, svd.singularValues()(0));
  }
  return s;
}

HomogeneousSymbol folland_stein_symbol(const FollandSteinParams& params, const TruncationPtr& t,
                                       const FrameConvention& conv) {
  if (params.n != t->n()) throw SymbolMismatch("Folland–Stein parameters and truncation disagree on n");
  Eigen::MatrixXcd sectors[2];
  for (int s = 0; s < 2; ++s) {
    const int mu = s == 0 ? 1 : -1;
    sectors[s] = quantized_sublaplacian(mu, *t, conv);
    sectors[s].diagonal().array() -= params.lambda * double(mu);
  }
  return HomogeneousSymbol(2, sectors[0], sectors[1], t, conv, t->N() - 1);
}

std::pair<double, double> sector_sigma_min(const HomogeneousSymbol& p) {
  double out[2] = {0.0, 0.0};
  if (p.reliable_size() == 0) return {0.0, 0.0};
  for (int s = 0; s < 2; ++s) {
    const Eigen::MatrixXcd B = p.reliable_block(s == 0 ? 1 : -1);
    if ((B - B.adjoint()).cwiseAbs().maxCoeff() == 0.0) {
      // Hermitian: singular values are |eigenvalues|
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(B, Eigen::EigenvaluesOnly);
      out[s] = es.eigenvalues().cwiseAbs().minCoeff();
    } else {
      Eigen::BDCSVD<Eigen::MatrixXcd> svd(B);
      out[s] = svd.singularValues().tail(1)(0);
    }
  }
  return {out[0], out[1]};
}

std::variant<HomogeneousSymbol, NotInvertible> invert(const HomogeneousSymbol& p) {
  const int b = p.reliable_size();
  const int d = p.trunc().size();
  NotInvertible fail;
  Eigen::MatrixXcd inv[2];
  for (int s = 0; s < 2; ++s) {
    const int mu = s == 0 ? 1 : -1;
    Eigen::MatrixXcd blk = p.reliable_block(mu);
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(blk, Eigen::ComputeFullU | Eigen::ComputeFullV);
    const auto& sv = svd.singularValues();
    const double smax = b > 0 ? sv(0) : 0.0, smin = b > 0 ? sv(b - 1) : 0.0;
    (s == 0 ? fail.sigma_min_plus : fail.sigma_min_minus) = smin;
    const bool singular = b == 0 || smin <= kSingularityTolerance * smax;
    (s == 0 ? fail.plus_singular : fail.minus_singular) = singular;
    inv[s] = Eigen::MatrixXcd::Zero(d, d);
    if (!singular)
      inv[s].topLeftCorner(b, b) =
          svd.matrixV() * sv.cwiseInverse().asDiagonal() * svd.matrixU().adjoint();
  }
  if (fail.plus_singular || fail.minus_singular) return fail;
  return HomogeneousSymbol(-p.order(), inv[0], inv[1], p.trunc_ptr(), p.convention(), p.reliable_level());
}

namespace {

template <class F>
HomogeneousSymbol spectral_map(const HomogeneousSymbol& p, double tol, int order, F&& f) {
  if (tol < 0) tol = 1e-6 * reliable_norm(p);
  const int b = p.reliable_size();
  const int d = p.trunc().size();
  Eigen::MatrixXcd out[2];
  for (int s = 0; s < 2; ++s) {
    const int mu = s == 0 ? 1 : -1;
    Eigen::MatrixXcd blk = p.reliable_block(mu);
    const double asym = b > 0 ? (blk - blk.adjoint()).cwiseAbs().maxCoeff() : 0.0;
    if (asym > 1e-8 * std::max(1.0, reliable_norm(p)))
      throw std::invalid_argument("spectral map requires self-adjoint sectors on the reliable block");
    out[s] = Eigen::MatrixXcd::Zero(d, d);
    if (b == 0) continue;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(0.5 * (blk + blk.adjoint()));
    const auto& ev = es.eigenvalues();
    Eigen::VectorXd g(b);
    for (int i = 0; i < b; ++i) {
      const double a = std::abs(ev(i));
      if (a > tol && a <= 10.0 * tol) throw SpectralGapError(ev(i), tol);
      g(i) = f(ev(i), a <= tol);
    }
    out[s].topLeftCorner(b, b) = es.eigenvectors() * g.asDiagonal() * es.eigenvectors().adjoint();
  }
  return HomogeneousSymbol(order, out[0], out[1], p.trunc_ptr(), p.convention(), p.reliable_level());
}

}  // namespace

HomogeneousSymbol kernel_projector(const HomogeneousSymbol& p, double tol) {
  return spectral_map(p, tol, 0, [](double, bool in_kernel) { return in_kernel ? 1.0 : 0.0; });
}

HomogeneousSymbol spectral_pseudo_inverse(const HomogeneousSymbol& p, double tol) {
  return spectral_map(p, tol, -p.order(), [](double e, bool in_kernel) { return in_kernel ? 0.0 : 1.0 / e; });
}

cplx scalar_slice(const HomogeneousSymbol& p, const Eigen::VectorXd& xi) {
  const int n = p.trunc().n();
  if (xi.size() != 2 * n + 1) throw std::invalid_argument("scalar_slice: covector must have 2n+1 entries");
  const double x0 = xi(0);
  if (std::abs(x0) < kSliceEpsilon)
    throw std::domain_error("scalar_slice: |xi_0| below the slice threshold " + std::to_string(kSliceEpsilon));
  const int mu = x0 > 0 ? 1 : -1;
  const double c = std::abs(p.convention().bracket_constant());
  Eigen::VectorXd eta = xi.tail(2 * n) / std::sqrt(c * std::abs(x0));
  return std::pow(std::abs(x0), 0.5 * p.order()) *
         matrix_to_weyl(p.sector(mu), p.trunc(), eta, mu, p.reliable_level());
}

HomogeneousSymbol swap_symbol(const HomogeneousSymbol& p) {
  Eigen::VectorXd par = parity_diagonal(p.trunc());
  auto tr = [&](const Eigen::MatrixXcd& m) -> Eigen::MatrixXcd {
    return par.asDiagonal() * m.transpose() * par.asDiagonal();
  };
  return HomogeneousSymbol(p.order(), tr(p.minus()), tr(p.plus()), p.trunc_ptr(), p.convention(), p.reliable_level());
}

HomogeneousSymbol conjugate_symbol(const HomogeneousSymbol& p) {
  Eigen::VectorXd par = parity_diagonal(p.trunc());
  auto tr = [&](const Eigen::MatrixXcd& m) -> Eigen::MatrixXcd {
    return par.asDiagonal() * m.conjugate() * par.asDiagonal();
  };
  return HomogeneousSymbol(p.order(), tr(p.minus()), tr(p.plus()), p.trunc_ptr(), p.convention(), p.reliable_level());
}

HomogeneousSymbol adjoint_symbol(const HomogeneousSymbol& p) {
  return HomogeneousSymbol(p.order(), p.plus().adjoint(), p.minus().adjoint(), p.trunc_ptr(), p.convention(),
                           p.reliable_level());
}

const HomogeneousSymbol* SymbolExpansion::term(int order) const {
  for (const auto& t : terms)
    if (t.order() == order) return &t;
  return nullptr;
}

SymbolExpansion star(const SymbolExpansion& p, const SymbolExpansion& q) {
  std::map<int, HomogeneousSymbol> acc;
  for (const auto& a : p.terms) {
    for (const auto& b : q.terms) {
      HomogeneousSymbol ab = star(a, b);
      auto it = acc.find(ab.order());
      if (it == acc.end())
        acc.emplace(ab.order(), ab);
      else
        it->second = it->second + ab;
    }
  }
  SymbolExpansion out;
  for (auto it = acc.rbegin(); it != acc.rend(); ++it) out.terms.push_back(it->second);
  return out;
}

}  // namespace heis
