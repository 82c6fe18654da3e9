#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <vector>

namespace sketchtensor {

/// Dense order-N tensor of 64-bit reals, flat storage in column-major
/// order: the first index varies fastest, so the flat position of
/// (i_1, ..., i_N) is sum_n i_n * prod_{m<n} I_m with 0-based indices.
/// Values are immutable by convention once built; operations are pure.
class DenseTensor {
 public:
  DenseTensor() = default;

  /// Zero-filled tensor. Throws std::invalid_argument on an empty shape or
  /// a zero dimension.
  explicit DenseTensor(std::vector<std::size_t> shape);

  DenseTensor(std::vector<std::size_t> shape, std::vector<double> data);

  std::size_t order() const { return shape_.size(); }
  const std::vector<std::size_t>& shape() const { return shape_; }
  std::size_t size() const { return data_.size(); }

  double operator[](std::size_t flat) const { return data_[flat]; }
  double& operator[](std::size_t flat) { return data_[flat]; }

  std::size_t flat_index(const std::vector<std::size_t>& idx) const;
  double at(const std::vector<std::size_t>& idx) const { return data_[flat_index(idx)]; }
  double& at(const std::vector<std::size_t>& idx) { return data_[flat_index(idx)]; }

  const std::vector<double>& data() const { return data_; }
  std::vector<double>& data() { return data_; }

  /// View of the flat data as an Eigen vector (this is vec(T)).
  Eigen::Map<const Eigen::VectorXd> vec() const {
    return {data_.data(), static_cast<Eigen::Index>(data_.size())};
  }

  double frobenius_norm() const { return vec().norm(); }

  DenseTensor& operator+=(const DenseTensor& other);
  DenseTensor& operator-=(const DenseTensor& other);
  DenseTensor& operator*=(double scale);

 private:
  std::vector<std::size_t> shape_;
  std::vector<double> data_;
};

/// CP-form tensor: weights and one I_n x R factor matrix per mode.
struct CpTensor {
  Eigen::VectorXd weights;
  std::vector<Eigen::MatrixXd> factors;

  CpTensor() = default;
  CpTensor(Eigen::VectorXd w, std::vector<Eigen::MatrixXd> f);

  std::size_t order() const { return factors.size(); }
  std::size_t rank() const { return static_cast<std::size_t>(weights.size()); }
  std::vector<std::size_t> shape() const;
};

/// Reconstructs the dense tensor sum_r w_r * u_r^(1) o ... o u_r^(N).
DenseTensor densify(const CpTensor& cp);

/// Mode-n matricization (n is 0-based): an I_n x prod_{m != n} I_m matrix
/// whose column order follows the flat layout with mode n removed.
Eigen::MatrixXd mode_unfold(const DenseTensor& t, std::size_t mode);

/// Inverse of mode_unfold for the given full shape.
DenseTensor mode_fold(const Eigen::MatrixXd& m, const std::vector<std::size_t>& shape,
                      std::size_t mode);

/// vec(a)^T vec(b); shapes must match.
double inner(const DenseTensor& a, const DenseTensor& b);

/// T(u, v, w) = sum_{ijk} T[i,j,k] u_i v_j w_k for an order-3 tensor.
double contract3(const DenseTensor& t, const Eigen::VectorXd& u,
                 const Eigen::VectorXd& v, const Eigen::VectorXd& w);

/// T with the identity at free_mode (0-based) and a, b contracted against
/// the remaining two modes in mode order. free_mode=0 gives T(I,a,b)_i.
Eigen::VectorXd contract3_free(const DenseTensor& t, const Eigen::VectorXd& a,
                               const Eigen::VectorXd& b, std::size_t free_mode);

/// Kronecker product of two dense matrices.
Eigen::MatrixXd kron(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b);

/// Contraction of mode_a of a with mode_b of b (0-based modes, equal
/// lengths); the result keeps a's remaining modes followed by b's.
DenseTensor contract_pair(const DenseTensor& a, const DenseTensor& b,
                          std::size_t mode_a, std::size_t mode_b);

/// Rank-1 tensor from an outer product of vectors, as a CpTensor.
CpTensor rank_one(double weight, const std::vector<Eigen::VectorXd>& vectors);

/// Order-2 tensor wrapping a matrix (column-major copy).
DenseTensor tensor_from_matrix(const Eigen::MatrixXd& m);

}  // namespace sketchtensor
