#include "sketchtensor/sketch.hpp"

#include <span>
#include <stdexcept>

#include "sketchtensor/fft.hpp"

namespace sketchtensor {

namespace {

void require_family_matches(const DenseTensor& t, const HashFamily& family,
                            const char* op) {
  if (t.order() != family.modes()) {
    throw std::invalid_argument(std::string(op) + ": family order mismatch");
  }
  for (std::size_t n = 0; n < family.modes(); ++n) {
    if (t.shape()[n] != family.pair(n).input_dim()) {
      throw std::invalid_argument(std::string(op) + ": shape mismatch");
    }
  }
}

void require_family_matches(const CpTensor& cp, const HashFamily& family,
                            const char* op) {
  if (cp.order() != family.modes()) {
    throw std::invalid_argument(std::string(op) + ": family order mismatch");
  }
  for (std::size_t n = 0; n < family.modes(); ++n) {
    if (static_cast<std::size_t>(cp.factors[n].rows()) != family.pair(n).input_dim()) {
      throw std::invalid_argument(std::string(op) + ": shape mismatch");
    }
  }
}

std::size_t equal_hash_len(const HashFamily& family, const char* op) {
  const std::size_t len = family.pair(0).hash_len();
  for (std::size_t n = 1; n < family.modes(); ++n) {
    if (family.pair(n).hash_len() != len) {
      throw std::invalid_argument(std::string(op) + ": all hash lengths must be equal");
    }
  }
  return len;
}

// Walks the tensor in flat order, maintaining the multi-index digits, and
// calls emit(value, idx) for each nonzero entry.
template <typename Emit>
void for_each_nonzero(const DenseTensor& t, Emit&& emit) {
  const std::vector<std::size_t>& dims = t.shape();
  std::vector<std::size_t> idx(dims.size(), 0);
  const std::size_t total = t.size();
  for (std::size_t flat = 0; flat < total; ++flat) {
    const double value = t[flat];
    if (value != 0.0) emit(value, idx);
    for (std::size_t n = 0; n < dims.size(); ++n) {
      if (++idx[n] < dims[n]) break;
      idx[n] = 0;
    }
  }
}

// Per-rank convolution of column count sketches; length n decides circular
// (n = J) versus linear (n = composed length) behavior.
Eigen::VectorXd convolved_cp_sketch(const CpTensor& cp, const HashFamily& family,
                                    std::size_t n) {
  std::vector<Eigen::MatrixXd> cs_factors;
  cs_factors.reserve(family.modes());
  for (std::size_t m = 0; m < family.modes(); ++m) {
    cs_factors.push_back(cs_sketch_columns(cp.factors[m], family.pair(m)));
  }
  Eigen::VectorXd out = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n));
  for (std::size_t r = 0; r < cp.rank(); ++r) {
    const double w = cp.weights[static_cast<Eigen::Index>(r)];
    if (w == 0.0) continue;
    std::vector<std::span<const double>> inputs;
    inputs.reserve(cs_factors.size());
    for (const Eigen::MatrixXd& cs : cs_factors) {
      inputs.emplace_back(cs.col(static_cast<Eigen::Index>(r)).data(),
                          static_cast<std::size_t>(cs.rows()));
    }
    const std::vector<double> conv = fft_convolve(inputs, n);
    for (std::size_t i = 0; i < n; ++i) out[static_cast<Eigen::Index>(i)] += w * conv[i];
  }
  return out;
}

}  // namespace

SketchVec::SketchVec(Eigen::VectorXd v, HashFamily f, SketchKind k)
    : values(std::move(v)), family(std::move(f)), kind(k) {
  const auto len = static_cast<std::size_t>(values.size());
  const std::size_t expected =
      kind == SketchKind::FCS ? family.composed_len() : family.pair(0).hash_len();
  if (len != expected) throw std::invalid_argument("SketchVec: length contract violated");
}

SketchTensor::SketchTensor(DenseTensor v, HashFamily f)
    : values(std::move(v)), family(std::move(f)) {
  if (values.shape() != family.hash_lens()) {
    throw std::invalid_argument("SketchTensor: shape does not match hash lengths");
  }
}

SketchVec cs_sketch(const Eigen::VectorXd& x, const HashPair& pair) {
  if (static_cast<std::size_t>(x.size()) != pair.input_dim()) {
    throw std::invalid_argument("cs_sketch: input length mismatch");
  }
  Eigen::VectorXd values = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(pair.hash_len()));
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    if (x[i] == 0.0) continue;
    values[pair.bucket(static_cast<std::size_t>(i))] +=
        pair.sign(static_cast<std::size_t>(i)) * x[i];
  }
  return SketchVec(std::move(values), HashFamily({pair}), SketchKind::CS);
}

Eigen::MatrixXd cs_sketch_columns(const Eigen::MatrixXd& u, const HashPair& pair) {
  if (static_cast<std::size_t>(u.rows()) != pair.input_dim()) {
    throw std::invalid_argument("cs_sketch_columns: input length mismatch");
  }
  Eigen::MatrixXd out =
      Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(pair.hash_len()), u.cols());
  for (Eigen::Index i = 0; i < u.rows(); ++i) {
    const auto bucket = static_cast<Eigen::Index>(pair.bucket(static_cast<std::size_t>(i)));
    const double sign = pair.sign(static_cast<std::size_t>(i));
    for (Eigen::Index r = 0; r < u.cols(); ++r) {
      if (u(i, r) == 0.0) continue;
      out(bucket, r) += sign * u(i, r);
    }
  }
  return out;
}

SketchVec ts_sketch(const DenseTensor& t, const HashFamily& family) {
  require_family_matches(t, family, "ts_sketch");
  const std::size_t len = equal_hash_len(family, "ts_sketch");
  Eigen::VectorXd values = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(len));
  for_each_nonzero(t, [&](double value, const std::vector<std::size_t>& idx) {
    std::size_t bucket = 0;
    int sign = 1;
    for (std::size_t n = 0; n < idx.size(); ++n) {
      bucket += family.pair(n).bucket(idx[n]);
      sign *= family.pair(n).sign(idx[n]);
    }
    values[static_cast<Eigen::Index>(bucket % len)] += sign * value;
  });
  return SketchVec(std::move(values), family, SketchKind::TS);
}

SketchVec ts_sketch(const CpTensor& cp, const HashFamily& family) {
  require_family_matches(cp, family, "ts_sketch");
  const std::size_t len = equal_hash_len(family, "ts_sketch");
  return SketchVec(convolved_cp_sketch(cp, family, len), family, SketchKind::TS);
}

SketchTensor hcs_sketch(const DenseTensor& t, const HashFamily& family) {
  require_family_matches(t, family, "hcs_sketch");
  DenseTensor values(family.hash_lens());
  const std::vector<std::size_t>& lens = values.shape();
  for_each_nonzero(t, [&](double value, const std::vector<std::size_t>& idx) {
    std::size_t flat = 0;
    std::size_t stride = 1;
    int sign = 1;
    for (std::size_t n = 0; n < idx.size(); ++n) {
      flat += family.pair(n).bucket(idx[n]) * stride;
      stride *= lens[n];
      sign *= family.pair(n).sign(idx[n]);
    }
    values[flat] += sign * value;
  });
  return SketchTensor(std::move(values), family);
}

SketchTensor hcs_sketch(const CpTensor& cp, const HashFamily& family) {
  require_family_matches(cp, family, "hcs_sketch");
  std::vector<Eigen::MatrixXd> cs_factors;
  cs_factors.reserve(family.modes());
  for (std::size_t n = 0; n < family.modes(); ++n) {
    cs_factors.push_back(cs_sketch_columns(cp.factors[n], family.pair(n)));
  }
  // The sketched tensor is the reconstruction of the count-sketched factors.
  CpTensor sketched(cp.weights, std::move(cs_factors));
  return SketchTensor(densify(sketched), family);
}

SketchVec fcs_sketch(const DenseTensor& t, const HashFamily& family) {
  require_family_matches(t, family, "fcs_sketch");
  Eigen::VectorXd values =
      Eigen::VectorXd::Zero(static_cast<Eigen::Index>(family.composed_len()));
  for_each_nonzero(t, [&](double value, const std::vector<std::size_t>& idx) {
    std::size_t bucket = 0;
    int sign = 1;
    for (std::size_t n = 0; n < idx.size(); ++n) {
      bucket += family.pair(n).bucket(idx[n]);
      sign *= family.pair(n).sign(idx[n]);
    }
    values[static_cast<Eigen::Index>(bucket)] += sign * value;
  });
  return SketchVec(std::move(values), family, SketchKind::FCS);
}

SketchVec fcs_sketch(const CpTensor& cp, const HashFamily& family) {
  require_family_matches(cp, family, "fcs_sketch");
  return SketchVec(convolved_cp_sketch(cp, family, family.composed_len()), family,
                   SketchKind::FCS);
}

}  // namespace sketchtensor
