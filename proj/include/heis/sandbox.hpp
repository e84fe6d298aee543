#pragma once

#include <vector>

#include <Eigen/Dense>

namespace heis {

/// Finite cochain complex V_0 → V_1 → ... → V_m with inner products.
struct SandboxComplex {
  std::vector<int> dims;
  /// differentials[q] : V_q → V_{q+1}.
  std::vector<Eigen::MatrixXd> differentials;
  /// Gram matrix of the inner product on each V_q.
  std::vector<Eigen::MatrixXd> metrics;
  std::vector<int> ranks;
};

struct SandboxOptions {
  /// Random inner products instead of the standard ones.
  bool random_metric = true;
  /// Choose ranks so that the complex has no cohomology.
  bool exact = false;
};

/// Random complex with ∂̄_{q+1}∂̄_q = 0 exactly: each differential is
/// P_{q+1} E_q P_q^{-1} with integer unimodular P_q and E_q mapping the last
/// rank_q coordinates of V_q onto the first rank_q coordinates of V_{q+1}.
SandboxComplex sandbox_build(const std::vector<int>& dims, unsigned long long seed, const SandboxOptions& opt = {});

/// Adjoint of differentials[q] for the given inner products.
Eigen::MatrixXd sandbox_adjoint(const SandboxComplex& c, int q);

struct SandboxLevel {
  int q = 0;
  int kernel_dim = 0;
  /// Π₀(∂̄_q) = 1 − ∂̄* N_{q+1} ∂̄ against the projector onto ker ∂̄_q.
  double pi0_residual = 0.0;
  /// Π₀(∂̄*_q) = 1 − ∂̄ N_{q−1} ∂̄* against the projector onto ker ∂̄*_q.
  double pi0_star_residual = 0.0;
  /// S_q = Π₀(∂̄_q) + Π₀(∂̄*_q) − 1.
  double szego_residual = 0.0;
};

struct SandboxStep {
  int q = 0;
  /// tr Π₀(∂̄_q) − dim V_q against −tr(∂̄*N∂̄) and −tr(∂̄∂̄*N).
  double cyclic_pi0 = 0.0;
  /// The same for Π₀(∂̄*_{q+2}).
  double cyclic_pi0_star = 0.0;
  /// tr(□N) = dim V_{q+1} − dim ker □_{q+1}.
  double cyclic_box = 0.0;
  /// [tr Π₀(∂̄_q) − dim V_q] + [tr Π₀(∂̄*_{q+2}) − dim V_{q+2}] + dim V_{q+1} − dim ker □_{q+1}.
  double master = 0.0;
  /// tr Π₀(∂̄_{q+2}) + tr Π₀(∂̄*_{q+2}) − dim V_{q+2} − dim ker □_{q+2}.
  double closing = 0.0;
};

struct SandboxReport {
  std::vector<SandboxLevel> levels;
  std::vector<SandboxStep> steps;
  double max_residual = 0.0;
  double tolerance = 1e-9;
  bool passed = false;
};

SandboxReport sandbox_verify(const SandboxComplex& c, double tolerance = 1e-9);

}  // namespace heis
