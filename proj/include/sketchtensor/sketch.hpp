#pragma once

#include <Eigen/Dense>

#include "sketchtensor/hashing.hpp"
#include "sketchtensor/tensor.hpp"

namespace sketchtensor {

enum class SketchKind { CS, TS, FCS };

/// A sketched vector together with the hash family that produced it.
/// Length contract: CS and TS sketches have length hash_len; FCS sketches
/// have the composed length sum(J_n) - N + 1.
struct SketchVec {
  Eigen::VectorXd values;
  HashFamily family;
  SketchKind kind;

  SketchVec(Eigen::VectorXd v, HashFamily f, SketchKind k);
};

/// A per-mode sketched tensor of shape (J_1, ..., J_N).
struct SketchTensor {
  DenseTensor values;
  HashFamily family;

  SketchTensor(DenseTensor v, HashFamily f);
};

/// Count sketch of a vector: bucket-scatter of s(i) * x(i). Runs in
/// O(nnz(x)); zero entries are skipped.
SketchVec cs_sketch(const Eigen::VectorXd& x, const HashPair& pair);

/// Per-column count sketch of a matrix under one pair (J x R result).
Eigen::MatrixXd cs_sketch_columns(const Eigen::MatrixXd& u, const HashPair& pair);

/// Tensor sketch of a dense tensor: buckets compose by modular sum, signs
/// by product. All hash lengths must be equal (throws otherwise).
SketchVec ts_sketch(const DenseTensor& t, const HashFamily& family);

/// Tensor sketch of a CP-form tensor via circular FFT convolution of the
/// per-factor count sketches; equals the dense path on the reconstruction.
SketchVec ts_sketch(const CpTensor& cp, const HashFamily& family);

/// Higher-order count sketch: independent bucket scatter per mode.
SketchTensor hcs_sketch(const DenseTensor& t, const HashFamily& family);

/// Higher-order count sketch of a CP-form tensor: weighted outer products
/// of the per-factor count sketches (materialized per rank-1 term).
SketchTensor hcs_sketch(const CpTensor& cp, const HashFamily& family);

/// Fast count sketch of a dense tensor: count sketch of vec(t) under the
/// composed pair, streamed entry by entry without materializing the
/// composed maps. Output length is family.composed_len().
SketchVec fcs_sketch(const DenseTensor& t, const HashFamily& family);

/// Fast count sketch of a CP-form tensor: zero-padded FFT linear
/// convolution of the per-factor count sketches, length composed_len().
SketchVec fcs_sketch(const CpTensor& cp, const HashFamily& family);

}  // namespace sketchtensor
