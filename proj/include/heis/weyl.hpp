#pragma once

#include <functional>
#include <stdexcept>

#include <Eigen/Dense>

#include "heis/fock.hpp"

namespace heis {

/// Phase-space function of 2n real variables (q_1..q_n, p_1..p_n).
using PhaseFunction = std::function<cplx(const Eigen::VectorXd&)>;

class OutOfReliabilityRadius : public std::out_of_range {
 public:
  OutOfReliabilityRadius(double radius, double limit);
  double radius() const { return radius_; }
  double limit() const { return limit_; }

 private:
  double radius_, limit_;
};

struct WeylQuantization {
  Eigen::MatrixXcd matrix;
  /// Max-entry difference between the order 2N+16 and order 2N+24 rules; the
  /// matrix itself comes from the finer rule.
  double error_estimate = 0.0;
};

/// Weyl symbol of |m><k| for a single mode at (q, p).
cplx single_mode_wigner(int m, int k, double q, double p);

/// Table w(m, k) of single-mode Weyl symbols for m, k <= N at (q, p).
Eigen::MatrixXcd single_mode_wigner_table(int N, double q, double p);

/// Matrix of Op_μ(f) = Op^W(f(q, μp)) in the truncated basis, by tensor
/// Gauss–Hermite quadrature.
WeylQuantization weyl_to_matrix(const PhaseFunction& f, int mu, const FockTruncation& t);

/// Weyl symbol of M at parameter μ evaluated at η = (q, p): the standard Weyl
/// symbol at (q, μp). Only levels <= `level` (default N) enter. The level
/// series is resummed with an Euler transform of its tail. Throws
/// OutOfReliabilityRadius when |η| exceeds the calibrated radius.
cplx matrix_to_weyl(const Eigen::MatrixXcd& M, const FockTruncation& t, const Eigen::VectorXd& eta, int mu,
                    int level = -1);

/// Same evaluation without the radius check.
cplx matrix_to_weyl_unchecked(const Eigen::MatrixXcd& M, const FockTruncation& t, const Eigen::VectorXd& eta,
                              int mu, int level = -1);

/// Largest radius, times a 0.9 safety factor, on which the identity and the
/// number operator are reconstructed to 1e-10 from levels <= level.
double calibrated_radius(int n, int level);

}  // namespace heis
