#include "heis/weyl.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <string>

#include "heis/quadrature.hpp"

namespace heis {

OutOfReliabilityRadius::OutOfReliabilityRadius(double radius, double limit)
    : std::out_of_range("phase point radius " + std::to_string(radius) + " exceeds reliability radius " +
                        std::to_string(limit)),
      radius_(radius),
      limit_(limit) {}

namespace {

// Normalized Laguerre functions sqrt(k!/(k+a)!) x^{a/2} e^{-x/2} L_k^{(a)}(x)
// for k = 0..count-1.
void laguerre_functions(int a, int count, double x, double* out) {
  if (count <= 0) return;
  double l0;
  if (x <= 0.0)
    l0 = a == 0 ? 1.0 : 0.0;
  else
    l0 = std::exp(0.5 * a * std::log(x) - 0.5 * x - 0.5 * std::lgamma(a + 1.0));
  out[0] = l0;
  if (count == 1) return;
  out[1] = (1.0 + a - x) * l0 / std::sqrt(1.0 + a);
  for (int k = 1; k + 1 < count; ++k) {
    out[k + 1] = ((2.0 * k + 1.0 + a - x) * out[k] - std::sqrt(double(k) * (k + a)) * out[k - 1]) /
                 std::sqrt((k + 1.0) * (k + 1.0 + a));
  }
}

// Euler-transform weights for level increments 0..K.
std::vector<double> level_weights(int K) {
  std::vector<double> c(K + 1, 1.0);
  for (int i = 0; i <= K; ++i) {
    double s = 0.0;
    for (int j = i; j <= K; ++j) s += binomial(j, i) * std::ldexp(1.0, -(j + 1));
    c[i] = s;
  }
  return c;
}

}  // namespace

Eigen::MatrixXcd single_mode_wigner_table(int N, double q, double p) {
  Eigen::MatrixXcd w(N + 1, N + 1);
  const double x = 2.0 * (q * q + p * p);
  const double phi = std::atan2(p, q);
  std::vector<double> l(N + 1);
  for (int a = 0; a <= N; ++a) {
    laguerre_functions(a, N + 1 - a, x, l.data());
    const cplx phase = std::polar(1.0, -a * phi);
    for (int k = 0; k + a <= N; ++k) {
      cplx v = (k % 2 == 0 ? 2.0 : -2.0) * l[k] * phase;
      w(k + a, k) = v;
      w(k, k + a) = std::conj(v);
    }
  }
  return w;
}

cplx single_mode_wigner(int m, int k, double q, double p) {
  return single_mode_wigner_table(std::max(m, k), q, p)(m, k);
}

namespace {

Eigen::MatrixXcd quadrature_matrix(const PhaseFunction& f, int mu, const FockTruncation& t, int order) {
  const int n = t.n(), N = t.N(), dim = t.size();
  const auto rule = gauss_hermite(order);
  const double norm = std::pow(2.0 * std::numbers::pi, -n);
  // Per-mode phase-space grid: point index = iq * order + ip.
  const int P = order * order;
  std::vector<Eigen::MatrixXcd> tables(P);
  std::vector<double> wts(P);
  for (int iq = 0; iq < order; ++iq) {
    for (int ip = 0; ip < order; ++ip) {
      tables[iq * order + ip] = single_mode_wigner_table(N, rule.nodes[iq], rule.nodes[ip]);
      wts[iq * order + ip] = rule.weights[iq] * rule.weights[ip];
    }
  }
  auto point = [&](const std::vector<int>& pts) {
    Eigen::VectorXd eta(2 * n);
    for (int j = 0; j < n; ++j) {
      eta(j) = rule.nodes[pts[j] / order];
      eta(n + j) = mu * rule.nodes[pts[j] % order];
    }
    return eta;
  };
  Eigen::MatrixXcd M = Eigen::MatrixXcd::Zero(dim, dim);
  if (n == 2) {
    // Contract the second mode first, then the first.
    std::vector<int> pts(2);
    for (int p1 = 0; p1 < P; ++p1) {
      pts[0] = p1;
      Eigen::MatrixXcd B = Eigen::MatrixXcd::Zero(N + 1, N + 1);
      for (int p2 = 0; p2 < P; ++p2) {
        pts[1] = p2;
        const cplx g = f(point(pts)) * wts[p2];
        if (g != cplx(0.0)) B += g * tables[p2];
      }
      B *= wts[p1] * norm;
      for (int r = 0; r < dim; ++r) {
        const auto& a = t.multi_index(r);
        for (int c = 0; c < dim; ++c) {
          const auto& b = t.multi_index(c);
          M(r, c) += tables[p1](b[0], a[0]) * B(b[1], a[1]);
        }
      }
    }
    return M;
  }
  std::vector<int> pts(n, 0);
  while (true) {
    double wt = norm;
    for (int j = 0; j < n; ++j) wt *= wts[pts[j]];
    const cplx g = f(point(pts)) * wt;
    if (g != cplx(0.0)) {
      for (int r = 0; r < dim; ++r) {
        const auto& alpha = t.multi_index(r);
        for (int c = 0; c < dim; ++c) {
          const auto& beta = t.multi_index(c);
          cplx w = g;
          for (int j = 0; j < n; ++j) w *= tables[pts[j]](beta[j], alpha[j]);
          M(r, c) += w;
        }
      }
    }
    int a = 0;
    while (a < n && ++pts[a] == P) pts[a++] = 0;
    if (a == n) break;
  }
  return M;
}

}  // namespace

WeylQuantization weyl_to_matrix(const PhaseFunction& f, int mu, const FockTruncation& t) {
  if (mu != 1 && mu != -1) throw std::invalid_argument("weyl_to_matrix: mu must be +1 or -1");
  WeylQuantization out;
  Eigen::MatrixXcd coarse = quadrature_matrix(f, mu, t, 2 * t.N() + 16);
  out.matrix = quadrature_matrix(f, mu, t, 2 * t.N() + 24);
  out.error_estimate = (out.matrix - coarse).cwiseAbs().maxCoeff();
  return out;
}

cplx matrix_to_weyl_unchecked(const Eigen::MatrixXcd& M, const FockTruncation& t, const Eigen::VectorXd& eta, int mu,
                              int level) {
  const int n = t.n();
  if (eta.size() != 2 * n) throw std::invalid_argument("matrix_to_weyl: phase point must have 2n entries");
  if (M.rows() != t.size() || M.cols() != t.size())
    throw std::invalid_argument("matrix_to_weyl: matrix does not match truncation");
  if (mu != 1 && mu != -1) throw std::invalid_argument("matrix_to_weyl: mu must be +1 or -1");
  const int K = level < 0 ? t.N() : std::min(level, t.N());
  const int dim = t.block_size(K);
  std::vector<Eigen::MatrixXcd> tables(n);
  for (int j = 0; j < n; ++j) tables[j] = single_mode_wigner_table(K, eta(j), mu * eta(n + j));
  std::vector<cplx> inc(K + 1, cplx(0.0));
  std::vector<double> level_size(K + 1, 0.0);
  for (int r = 0; r < dim; ++r) {
    const auto& alpha = t.multi_index(r);
    for (int c = 0; c < dim; ++c) {
      const cplx m = M(r, c);
      if (m == cplx(0.0)) continue;
      const auto& beta = t.multi_index(c);
      cplx w = m;
      for (int j = 0; j < n; ++j) w *= tables[j](alpha[j], beta[j]);
      const int L = std::max(t.level(r), t.level(c));
      inc[L] += w;
      level_size[L] = std::max(level_size[L], std::abs(m));
    }
  }
  // A matrix that vanishes on its top level is treated as an exact finite
  // sum; otherwise the level series is resummed.
  const double scale = *std::max_element(level_size.begin(), level_size.end());
  cplx s = 0.0;
  if (level_size[K] <= 1e-14 * scale) {
    for (int L = 0; L <= K; ++L) s += inc[L];
    return s;
  }
  const auto weights = level_weights(K);
  for (int L = 0; L <= K; ++L) s += weights[L] * inc[L];
  return s;
}

cplx matrix_to_weyl(const Eigen::MatrixXcd& M, const FockTruncation& t, const Eigen::VectorXd& eta, int mu,
                    int level) {
  const double limit = t.reliability_radius(level);
  const double r = eta.norm();
  if (r > limit) throw OutOfReliabilityRadius(r, limit);
  return matrix_to_weyl_unchecked(M, t, eta, mu, level);
}

namespace {

double scan_radius(int n, int level) {
  FockTruncation t(n, level);
  const int dim = t.size();
  Eigen::MatrixXcd I = Eigen::MatrixXcd::Identity(dim, dim);
  Eigen::MatrixXcd Nop = Eigen::MatrixXcd::Zero(dim, dim);
  for (int i = 0; i < dim; ++i) Nop(i, i) = t.level(i);
  std::vector<Eigen::VectorXd> dirs;
  Eigen::VectorXd e = Eigen::VectorXd::Zero(2 * n);
  e(0) = 1.0;
  dirs.push_back(e);
  e.setZero();
  e(2 * n - 1) = 1.0;
  dirs.push_back(e);
  dirs.push_back(Eigen::VectorXd::Ones(2 * n).normalized());
  e.setZero();
  for (int a = 0; a < 2 * n; ++a) e(a) = std::cos(1.0 + 2.3 * a);
  dirs.push_back(e.normalized());
  const double tol = 1e-10;
  const double step = 0.01;
  const int max_steps = static_cast<int>(std::ceil((std::sqrt(2.0 * level) + 1.0) / step));
  int good = -1;
  for (int s = 0; s <= max_steps; ++s) {
    const double r = s * step;
    bool ok = true;
    for (const auto& d : dirs) {
      Eigen::VectorXd eta = r * d;
      cplx wi = matrix_to_weyl_unchecked(I, t, eta, 1, level);
      double exact = 0.5 * (eta.squaredNorm() - n);
      cplx wn = matrix_to_weyl_unchecked(Nop, t, eta, 1, level);
      if (std::abs(wi - 1.0) > tol || std::abs(wn - exact) > tol * (1.0 + std::abs(exact))) {
        ok = false;
        break;
      }
    }
    if (!ok) break;
    good = s;
  }
  return good < 0 ? 0.0 : 0.9 * good * step;
}

}  // namespace

double calibrated_radius(int n, int level) {
  static std::mutex mu;
  static std::map<std::pair<int, int>, double> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto key = std::make_pair(n, level);
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;
  double r = scan_radius(n, level);
  cache[key] = r;
  return r;
}

}  // namespace heis
