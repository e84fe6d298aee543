#include "heis/fock.hpp"

#include <cmath>
#include <functional>
#include <stdexcept>

#include "heis/weyl.hpp"

namespace heis {

double binomial(int a, int b) {
  if (b < 0 || b > a) return 0.0;
  return std::round(std::exp(std::lgamma(a + 1.0) - std::lgamma(b + 1.0) - std::lgamma(a - b + 1.0)));
}

FockTruncation::FockTruncation(int n, int N) : n_(n), N_(N) {
  if (n < 1) throw std::invalid_argument("FockTruncation: n must be >= 1");
  if (N < 0) throw std::invalid_argument("FockTruncation: N must be >= 0");
  std::vector<int> alpha(n, 0);
  std::function<void(int, int)> rec = [&](int mode, int remaining) {
    if (mode == n - 1) {
      alpha[mode] = remaining;
      basis_.push_back(alpha);
      return;
    }
    for (int k = remaining; k >= 0; --k) {
      alpha[mode] = k;
      rec(mode + 1, remaining - k);
    }
  };
  for (int L = 0; L <= N; ++L) {
    rec(0, L);
  }
  for (size_t i = 0; i < basis_.size(); ++i) {
    int lvl = 0;
    for (int a : basis_[i]) lvl += a;
    levels_.push_back(lvl);
    index_[basis_[i]] = static_cast<int>(i);
  }
}

int FockTruncation::index_of(const std::vector<int>& alpha) const {
  auto it = index_.find(alpha);
  return it == index_.end() ? -1 : it->second;
}

int FockTruncation::block_size(int L) const {
  if (L < 0) return 0;
  return static_cast<int>(binomial(std::min(L, N_) + n_, n_));
}

double FockTruncation::reliability_radius(int level) const {
  return calibrated_radius(n_, level < 0 ? N_ : std::min(level, N_));
}

Eigen::MatrixXcd annihilation(const FockTruncation& t, int j) {
  if (j < 0 || j >= t.n()) throw std::out_of_range("annihilation: mode out of range");
  Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(t.size(), t.size());
  for (int i = 0; i < t.size(); ++i) {
    auto alpha = t.multi_index(i);
    if (alpha[j] == 0) continue;
    const double v = std::sqrt(double(alpha[j]));
    alpha[j] -= 1;
    a(t.index_of(alpha), i) = v;
  }
  return a;
}

Eigen::MatrixXcd quantize_field(int j, int mu, const FockTruncation& t, const FrameConvention& conv) {
  const int n = t.n();
  if (j < 0 || j > 2 * n) throw std::out_of_range("quantize_field: index out of range");
  if (mu != 1 && mu != -1) throw std::invalid_argument("quantize_field: mu must be +1 or -1");
  if (j == 0) return Eigen::MatrixXcd::Identity(t.size(), t.size()) * double(mu);
  const double s = std::sqrt(std::abs(conv.bracket_constant()));
  const int mode = (j <= n ? j : j - n) - 1;
  Eigen::MatrixXcd a = annihilation(t, mode);
  Eigen::MatrixXcd ad = a.adjoint();
  if (j <= n) return (a + ad) * (s / std::sqrt(2.0));
  return (a - ad) * (cplx(0.0, -1.0) * double(mu) * s / std::sqrt(2.0));
}

Eigen::MatrixXcd quantized_sublaplacian(int mu, const FockTruncation& t, const FrameConvention& conv) {
  Eigen::MatrixXcd S = Eigen::MatrixXcd::Zero(t.size(), t.size());
  for (int j = 1; j <= 2 * t.n(); ++j) {
    Eigen::MatrixXcd A = quantize_field(j, mu, t, conv);
    S += 0.5 * A * A;
  }
  return S;
}

Eigen::VectorXd parity_diagonal(const FockTruncation& t) {
  Eigen::VectorXd p(t.size());
  for (int i = 0; i < t.size(); ++i) p(i) = (t.level(i) % 2 == 0) ? 1.0 : -1.0;
  return p;
}

}  // namespace heis
