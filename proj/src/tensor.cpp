#include "sketchtensor/tensor.hpp"

#include <stdexcept>

namespace sketchtensor {

namespace {

std::size_t checked_size(const std::vector<std::size_t>& shape) {
  if (shape.empty()) throw std::invalid_argument("DenseTensor: empty shape");
  std::size_t total = 1;
  for (std::size_t dim : shape) {
    if (dim == 0) throw std::invalid_argument("DenseTensor: zero dimension");
    total *= dim;
  }
  return total;
}

void require_same_shape(const DenseTensor& a, const DenseTensor& b, const char* op) {
  if (a.shape() != b.shape()) {
    throw std::invalid_argument(std::string(op) + ": shape mismatch");
  }
}

}  // namespace

DenseTensor::DenseTensor(std::vector<std::size_t> shape)
    : shape_(std::move(shape)), data_(checked_size(shape_), 0.0) {}

DenseTensor::DenseTensor(std::vector<std::size_t> shape, std::vector<double> data)
    : shape_(std::move(shape)), data_(std::move(data)) {
  if (checked_size(shape_) != data_.size()) {
    throw std::invalid_argument("DenseTensor: data length does not match shape");
  }
}

std::size_t DenseTensor::flat_index(const std::vector<std::size_t>& idx) const {
  if (idx.size() != shape_.size()) {
    throw std::invalid_argument("DenseTensor: index order mismatch");
  }
  std::size_t flat = 0;
  std::size_t stride = 1;
  for (std::size_t n = 0; n < shape_.size(); ++n) {
    if (idx[n] >= shape_[n]) throw std::invalid_argument("DenseTensor: index out of range");
    flat += idx[n] * stride;
    stride *= shape_[n];
  }
  return flat;
}

DenseTensor& DenseTensor::operator+=(const DenseTensor& other) {
  require_same_shape(*this, other, "operator+=");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += other.data_[i];
  return *this;
}

DenseTensor& DenseTensor::operator-=(const DenseTensor& other) {
  require_same_shape(*this, other, "operator-=");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= other.data_[i];
  return *this;
}

DenseTensor& DenseTensor::operator*=(double scale) {
  for (double& v : data_) v *= scale;
  return *this;
}

CpTensor::CpTensor(Eigen::VectorXd w, std::vector<Eigen::MatrixXd> f)
    : weights(std::move(w)), factors(std::move(f)) {
  if (factors.empty()) throw std::invalid_argument("CpTensor: no factors");
  for (const Eigen::MatrixXd& u : factors) {
    if (u.cols() != weights.size() || u.rows() == 0) {
      throw std::invalid_argument("CpTensor: factor shape mismatch");
    }
  }
}

std::vector<std::size_t> CpTensor::shape() const {
  std::vector<std::size_t> dims(factors.size());
  for (std::size_t n = 0; n < factors.size(); ++n) {
    dims[n] = static_cast<std::size_t>(factors[n].rows());
  }
  return dims;
}

DenseTensor densify(const CpTensor& cp) {
  const std::size_t num_modes = cp.order();
  DenseTensor out(cp.shape());
  const std::vector<std::size_t>& dims = out.shape();
  for (std::size_t r = 0; r < cp.rank(); ++r) {
    const double w = cp.weights[static_cast<Eigen::Index>(r)];
    if (w == 0.0) continue;
    std::vector<std::size_t> idx(num_modes, 0);
    // tail = product of factor entries over modes 1..N-1 at the current index
    double tail = w;
    for (std::size_t n = 1; n < num_modes; ++n) {
      tail *= cp.factors[n](0, static_cast<Eigen::Index>(r));
    }
    std::size_t flat = 0;
    const Eigen::MatrixXd& first = cp.factors[0];
    while (true) {
      for (std::size_t i0 = 0; i0 < dims[0]; ++i0) {
        out[flat++] += first(static_cast<Eigen::Index>(i0), static_cast<Eigen::Index>(r)) * tail;
      }
      std::size_t n = 1;
      while (n < num_modes && ++idx[n] == dims[n]) idx[n++] = 0;
      if (n == num_modes) break;
      tail = w;
      for (std::size_t m = 1; m < num_modes; ++m) {
        tail *= cp.factors[m](static_cast<Eigen::Index>(idx[m]), static_cast<Eigen::Index>(r));
      }
    }
  }
  return out;
}

Eigen::MatrixXd mode_unfold(const DenseTensor& t, std::size_t mode) {
  const std::vector<std::size_t>& dims = t.shape();
  if (mode >= dims.size()) throw std::invalid_argument("mode_unfold: mode out of range");
  std::size_t inner = 1;
  for (std::size_t m = 0; m < mode; ++m) inner *= dims[m];
  const std::size_t len = dims[mode];
  const std::size_t outer = t.size() / (inner * len);
  Eigen::MatrixXd out(static_cast<Eigen::Index>(len),
                      static_cast<Eigen::Index>(inner * outer));
  for (std::size_t o = 0; o < outer; ++o) {
    for (std::size_t i = 0; i < len; ++i) {
      const std::size_t base = (o * len + i) * inner;
      for (std::size_t k = 0; k < inner; ++k) {
        out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(o * inner + k)) =
            t[base + k];
      }
    }
  }
  return out;
}

DenseTensor mode_fold(const Eigen::MatrixXd& m, const std::vector<std::size_t>& shape,
                      std::size_t mode) {
  if (mode >= shape.size()) throw std::invalid_argument("mode_fold: mode out of range");
  DenseTensor out(shape);
  std::size_t inner = 1;
  for (std::size_t k = 0; k < mode; ++k) inner *= shape[k];
  const std::size_t len = shape[mode];
  const std::size_t outer = out.size() / (inner * len);
  if (m.rows() != static_cast<Eigen::Index>(len) ||
      m.cols() != static_cast<Eigen::Index>(inner * outer)) {
    throw std::invalid_argument("mode_fold: matrix does not match shape");
  }
  for (std::size_t o = 0; o < outer; ++o) {
    for (std::size_t i = 0; i < len; ++i) {
      const std::size_t base = (o * len + i) * inner;
      for (std::size_t k = 0; k < inner; ++k) {
        out[base + k] = m(static_cast<Eigen::Index>(i),
                          static_cast<Eigen::Index>(o * inner + k));
      }
    }
  }
  return out;
}

double inner(const DenseTensor& a, const DenseTensor& b) {
  require_same_shape(a, b, "inner");
  return a.vec().dot(b.vec());
}

namespace {

void require_order3(const DenseTensor& t, const Eigen::VectorXd& a,
                    const Eigen::VectorXd& b, std::size_t mode_a, std::size_t mode_b,
                    const char* op) {
  if (t.order() != 3) throw std::invalid_argument(std::string(op) + ": order-3 tensor required");
  if (a.size() != static_cast<Eigen::Index>(t.shape()[mode_a]) ||
      b.size() != static_cast<Eigen::Index>(t.shape()[mode_b])) {
    throw std::invalid_argument(std::string(op) + ": vector length mismatch");
  }
}

}  // namespace

double contract3(const DenseTensor& t, const Eigen::VectorXd& u,
                 const Eigen::VectorXd& v, const Eigen::VectorXd& w) {
  require_order3(t, u, v, 0, 1, "contract3");
  if (w.size() != static_cast<Eigen::Index>(t.shape()[2])) {
    throw std::invalid_argument("contract3: vector length mismatch");
  }
  const auto rows = static_cast<Eigen::Index>(t.shape()[0]);
  const auto cols = static_cast<Eigen::Index>(t.shape()[1]);
  double acc = 0.0;
  for (Eigen::Index k = 0; k < w.size(); ++k) {
    if (w[k] == 0.0) continue;
    Eigen::Map<const Eigen::MatrixXd> slice(
        t.data().data() + static_cast<std::size_t>(k * rows * cols), rows, cols);
    acc += w[k] * u.dot(slice * v);
  }
  return acc;
}

Eigen::VectorXd contract3_free(const DenseTensor& t, const Eigen::VectorXd& a,
                               const Eigen::VectorXd& b, std::size_t free_mode) {
  if (free_mode > 2) throw std::invalid_argument("contract3_free: mode out of range");
  const std::size_t m1 = free_mode == 0 ? 1 : 0;
  const std::size_t m2 = free_mode == 2 ? 1 : 2;
  require_order3(t, a, b, m1, m2, "contract3_free");
  const auto rows = static_cast<Eigen::Index>(t.shape()[0]);
  const auto cols = static_cast<Eigen::Index>(t.shape()[1]);
  const auto depth = static_cast<Eigen::Index>(t.shape()[2]);
  Eigen::VectorXd out = Eigen::VectorXd::Zero(
      static_cast<Eigen::Index>(t.shape()[free_mode]));
  for (Eigen::Index k = 0; k < depth; ++k) {
    Eigen::Map<const Eigen::MatrixXd> slice(
        t.data().data() + static_cast<std::size_t>(k * rows * cols), rows, cols);
    switch (free_mode) {
      case 0:  // out_i = sum_k (slice * a)_i * b_k
        if (b[k] != 0.0) out.noalias() += b[k] * (slice * a);
        break;
      case 1:  // out_j = sum_k (slice^T * a)_j * b_k
        if (b[k] != 0.0) out.noalias() += b[k] * (slice.transpose() * a);
        break;
      default:  // out_k = a^T slice b
        out[k] = a.dot(slice * b);
        break;
    }
  }
  return out;
}

Eigen::MatrixXd kron(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  Eigen::MatrixXd out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

DenseTensor contract_pair(const DenseTensor& a, const DenseTensor& b,
                          std::size_t mode_a, std::size_t mode_b) {
  if (mode_a >= a.order() || mode_b >= b.order()) {
    throw std::invalid_argument("contract_pair: mode out of range");
  }
  if (a.shape()[mode_a] != b.shape()[mode_b]) {
    throw std::invalid_argument("contract_pair: contracted dimensions differ");
  }
  if (a.order() + b.order() < 3) {
    throw std::invalid_argument("contract_pair: result would have no modes");
  }
  const Eigen::MatrixXd au = mode_unfold(a, mode_a);
  const Eigen::MatrixXd bu = mode_unfold(b, mode_b);
  const Eigen::MatrixXd prod = au.transpose() * bu;  // a-rest x b-rest
  std::vector<std::size_t> shape;
  for (std::size_t n = 0; n < a.order(); ++n) {
    if (n != mode_a) shape.push_back(a.shape()[n]);
  }
  for (std::size_t n = 0; n < b.order(); ++n) {
    if (n != mode_b) shape.push_back(b.shape()[n]);
  }
  std::vector<double> data(prod.data(), prod.data() + prod.size());
  return DenseTensor(std::move(shape), std::move(data));
}

CpTensor rank_one(double weight, const std::vector<Eigen::VectorXd>& vectors) {
  Eigen::VectorXd w(1);
  w[0] = weight;
  std::vector<Eigen::MatrixXd> factors;
  factors.reserve(vectors.size());
  for (const Eigen::VectorXd& v : vectors) factors.push_back(v);
  return CpTensor(std::move(w), std::move(factors));
}

DenseTensor tensor_from_matrix(const Eigen::MatrixXd& m) {
  std::vector<double> data(m.data(), m.data() + m.size());
  return DenseTensor({static_cast<std::size_t>(m.rows()), static_cast<std::size_t>(m.cols())},
                     std::move(data));
}

}  // namespace sketchtensor
