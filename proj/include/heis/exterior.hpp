#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

namespace heis {

/// Exterior algebra on g orthonormal generators; k-forms use sorted index
/// subsets in lexicographic order.
class ExteriorAlgebra {
 public:
  explicit ExteriorAlgebra(int generators);

  int generators() const { return g_; }
  const std::vector<std::vector<int>>& basis(int k) const;
  int dim(int k) const;
  int index_of(const std::vector<int>& subset) const;

  /// Matrix of e_i ∧ · : Λ^k → Λ^{k+1}.
  Eigen::MatrixXd wedge(int i, int k) const;
  /// Matrix of the interior product with e_i: Λ^k → Λ^{k−1}.
  Eigen::MatrixXd contract(int i, int k) const;

 private:
  int g_;
  std::vector<std::vector<std::vector<int>>> basis_;
};

/// Descriptor of a fiber carried by form-valued symbols.
struct Fiber {
  std::string kind;
  int dim = 0;
  std::vector<std::string> labels;
  /// Optional grading offset of each basis vector (q − p for bidegree-pure
  /// vectors); empty means all zero.
  std::vector<int> offsets;
  int offset(int f) const { return offsets.empty() ? 0 : offsets.at(f); }
  bool operator==(const Fiber& o) const { return kind == o.kind && dim == o.dim; }
};

/// Λ^{p,q} of the model: wedge monomials θ^J ∧ θ̄^K, ordered
/// lexicographically on (J, K). Inside the exterior algebra on 2n generators
/// θ^j is generator j and θ̄^j is generator n + j.
class PQFiber {
 public:
  PQFiber(int n, int p, int q);

  int n() const { return n_; }
  int p() const { return p_; }
  int q() const { return q_; }
  int dim() const { return static_cast<int>(basis_.size()); }
  const std::vector<int>& monomial(int i) const { return basis_.at(i); }
  Fiber descriptor() const;

  /// Embedding Λ^{p,q} → Λ^{p+q} (2n generators) as a 0/1 matrix.
  Eigen::MatrixXd embedding() const;

 private:
  int n_, p_, q_;
  std::vector<std::vector<int>> basis_;
};

/// θ̄^j ∧ · : Λ^{p,q} → Λ^{p,q+1}.
Eigen::MatrixXd wedge_theta_bar(int n, int p, int q, int j);
/// θ^j ∧ · : Λ^{p,q} → Λ^{p+1,q}.
Eigen::MatrixXd wedge_theta(int n, int p, int q, int j);

/// Horizontal forms Λ^k(R^{2n}) with orthonormal basis e_S.
Fiber horizontal_descriptor(int n, int k);

}  // namespace heis
