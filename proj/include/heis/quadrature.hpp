#pragma once

#include <vector>

namespace heis {

struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// Gauss–Hermite rule of the given order for integrals over the real line of
/// the form int g(t) dt, where g is a Gaussian times a polynomial. Weights are
/// the Christoffel weights multiplied by exp(t^2), computed from normalized
/// Hermite functions so large orders stay finite.
QuadratureRule gauss_hermite(int order);

/// Gauss–Legendre rule on [a, b].
QuadratureRule gauss_legendre(int order, double a = -1.0, double b = 1.0);

/// Normalized Hermite functions h_0..h_{count-1} at t.
std::vector<double> hermite_functions(int count, double t);

}  // namespace heis
