#include "heis/quadrature.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include <Eigen/Dense>

namespace heis {

std::vector<double> hermite_functions(int count, double t) {
  std::vector<double> h(std::max(count, 0));
  if (count == 0) return h;
  h[0] = std::pow(std::numbers::pi, -0.25) * std::exp(-0.5 * t * t);
  if (count > 1) h[1] = std::sqrt(2.0) * t * h[0];
  for (int k = 1; k + 1 < count; ++k)
    h[k + 1] = std::sqrt(2.0 / (k + 1)) * t * h[k] - std::sqrt(double(k) / (k + 1)) * h[k - 1];
  return h;
}

namespace {

// Eigenvalues of the symmetric Jacobi matrix with zero diagonal and the given
// off-diagonal entries.
std::vector<double> jacobi_nodes(const std::vector<double>& off) {
  const int m = static_cast<int>(off.size()) + 1;
  Eigen::MatrixXd J = Eigen::MatrixXd::Zero(m, m);
  for (int i = 0; i + 1 < m; ++i) J(i, i + 1) = J(i + 1, i) = off[i];
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(J, Eigen::EigenvaluesOnly);
  return {es.eigenvalues().data(), es.eigenvalues().data() + m};
}

}  // namespace

QuadratureRule gauss_hermite(int order) {
  if (order < 1) throw std::invalid_argument("gauss_hermite: order must be >= 1");
  std::vector<double> off(order - 1);
  for (int k = 1; k < order; ++k) off[k - 1] = std::sqrt(k / 2.0);
  QuadratureRule r;
  r.nodes = order == 1 ? std::vector<double>{0.0} : jacobi_nodes(off);
  r.weights.resize(order);
  for (int i = 0; i < order; ++i) {
    double t = r.nodes[i];
    for (int it = 0; it < 3; ++it) {
      auto h = hermite_functions(order + 1, t);
      double deriv = std::sqrt(2.0 * order) * h[order - 1] - t * h[order];
      if (deriv == 0.0) break;
      t -= h[order] / deriv;
    }
    r.nodes[i] = t;
    auto h = hermite_functions(order, t);
    r.weights[i] = 1.0 / (order * h[order - 1] * h[order - 1]);
  }
  return r;
}

QuadratureRule gauss_legendre(int order, double a, double b) {
  if (order < 1) throw std::invalid_argument("gauss_legendre: order must be >= 1");
  QuadratureRule r;
  r.nodes.resize(order);
  r.weights.resize(order);
  std::vector<double> off(order - 1);
  for (int k = 1; k < order; ++k) off[k - 1] = k / std::sqrt(4.0 * k * k - 1.0);
  std::vector<double> x = order == 1 ? std::vector<double>{0.0} : jacobi_nodes(off);
  for (int i = 0; i < order; ++i) {
    double t = x[i], p0 = 1.0, p1 = t;
    for (int it = 0; it < 3; ++it) {
      p0 = 1.0;
      p1 = t;
      for (int k = 2; k <= order; ++k) {
        double p2 = ((2.0 * k - 1.0) * t * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      if (order == 1) {
        p1 = t;
        p0 = 1.0;
      }
      double dp = order * (t * p1 - p0) / (t * t - 1.0);
      t -= p1 / dp;
    }
    p0 = 1.0;
    p1 = t;
    for (int k = 2; k <= order; ++k) {
      double p2 = ((2.0 * k - 1.0) * t * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    double dp = order == 1 ? 1.0 : order * (t * p1 - p0) / (t * t - 1.0);
    double w = 2.0 / ((1.0 - t * t) * dp * dp);
    r.nodes[i] = 0.5 * (b - a) * t + 0.5 * (b + a);
    r.weights[i] = 0.5 * (b - a) * w;
  }
  return r;
}

}  // namespace heis
