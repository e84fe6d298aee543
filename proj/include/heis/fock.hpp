#pragma once

#include <complex>
#include <map>
#include <vector>

#include <Eigen/Dense>

#include "heis/group.hpp"

namespace heis {

using cplx = std::complex<double>;

/// Hermite basis of n modes truncated at total level N, in graded
/// lexicographic order (by total level, then lexicographically descending).
/// Indices with total level <= L form the leading block of size
/// binomial(L+n, n).
class FockTruncation {
 public:
  FockTruncation(int n, int N);

  int n() const { return n_; }
  int N() const { return N_; }
  int size() const { return static_cast<int>(basis_.size()); }
  const std::vector<int>& multi_index(int i) const { return basis_.at(i); }
  int level(int i) const { return levels_.at(i); }
  /// Index of a multi-index, or -1 when it lies above the truncation.
  int index_of(const std::vector<int>& alpha) const;
  /// Number of basis vectors of total level <= L.
  int block_size(int L) const;

  /// Radius within which matrix_to_weyl is trusted for matrices exact up to
  /// the given level (default N). Calibrated numerically once per (n, level).
  double reliability_radius(int level = -1) const;

  bool operator==(const FockTruncation& o) const { return n_ == o.n_ && N_ == o.N_; }

 private:
  int n_, N_;
  std::vector<std::vector<int>> basis_;
  std::vector<int> levels_;
  std::map<std::vector<int>, int> index_;
};

double binomial(int a, int b);

/// Annihilation operator of mode j (0-based) in the truncated basis.
Eigen::MatrixXcd annihilation(const FockTruncation& t, int j);

/// dΓ_μ(−iX_j) for j = 0..2n. With Q, P the position and momentum
/// operators and c the bracket constant: j in 1..n gives sqrt|c| Q_j,
/// j in n+1..2n gives μ sqrt|c| P_j, and j = 0 gives μ times the identity.
Eigen::MatrixXcd quantize_field(int j, int mu, const FockTruncation& t, const FrameConvention& conv);

/// ½ Σ_j dΓ_μ(−iX_j)², the quantized sublaplacian; equals |c|(|α| + n/2)
/// on levels <= N−1.
Eigen::MatrixXcd quantized_sublaplacian(int mu, const FockTruncation& t, const FrameConvention& conv);

/// Diagonal matrix with (−1)^{|α|}: the parity operator.
Eigen::VectorXd parity_diagonal(const FockTruncation& t);

}  // namespace heis
