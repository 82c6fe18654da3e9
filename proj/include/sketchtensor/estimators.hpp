#pragma once

#include <Eigen/Dense>

#include <complex>
#include <span>
#include <vector>

#include "sketchtensor/sketch.hpp"

namespace sketchtensor {

enum class ReductionPolicy { Median };

/// Shared knobs of every sketched estimator: hash length J applied to all
/// modes, the number D of independent sketch repetitions, and the base
/// seed. The d-th repetition uses the family derived via family_seed(seed, d).
struct EstimatorConfig {
  std::size_t hash_len = 16;
  std::size_t sketch_count = 1;
  std::uint64_t seed = 0;
  ReductionPolicy reduction = ReductionPolicy::Median;
};

/// The sketch_count independent families for a tensor shape under cfg.
std::vector<HashFamily> families_for(const std::vector<std::size_t>& dims,
                                     const EstimatorConfig& cfg);

/// Elementwise median; an even count averages the two middle order
/// statistics. Throws std::invalid_argument on empty input.
double median_reduce(std::vector<double> values);
Eigen::VectorXd median_reduce(const std::vector<Eigen::VectorXd>& values);

/// A fast-count-sketched tensor with the DFT of its sketch cached, ready
/// for repeated contraction estimates against changing vectors.
struct PrecomputedFcs {
  SketchVec sketch;
  std::vector<std::complex<double>> spectrum;

  explicit PrecomputedFcs(SketchVec s);
};

PrecomputedFcs precompute_fcs(const DenseTensor& t, const HashFamily& family);

/// Cross-correlation vector z of length composed_len: reading
/// sign_f(i) * z[bucket_f(i)] estimates the contraction with the identity
/// left at free_mode and (a, b) contracted against the other two modes.
Eigen::VectorXd precompute_z(const PrecomputedFcs& pre, const Eigen::VectorXd& a,
                             const Eigen::VectorXd& b, std::size_t free_mode);

/// Median-of-sketches estimate of T(u, v, w).
double estimate_uvw(std::span<const PrecomputedFcs> pres, const Eigen::VectorXd& u,
                    const Eigen::VectorXd& v, const Eigen::VectorXd& w);
double estimate_uuu(std::span<const PrecomputedFcs> pres, const Eigen::VectorXd& u);

/// Median-of-sketches estimate of the contraction with the identity at
/// free_mode (0-based) and a, b on the remaining modes in mode order.
Eigen::VectorXd estimate_iuv(std::span<const PrecomputedFcs> pres,
                             const Eigen::VectorXd& a, const Eigen::VectorXd& b,
                             std::size_t free_mode);
Eigen::VectorXd estimate_iuu(std::span<const PrecomputedFcs> pres,
                             const Eigen::VectorXd& u);

/// Single-family inner-product estimate <FCS(a), FCS(b)>.
double inner_once(const DenseTensor& a, const DenseTensor& b, const HashFamily& family);

/// Median over cfg.sketch_count independent inner-product estimates.
double estimate_inner(const DenseTensor& a, const DenseTensor& b,
                      const EstimatorConfig& cfg);

/// Tensor-sketch counterparts (circular convolution at hash length J);
/// used as the equal-hash baseline.
struct PrecomputedTs {
  SketchVec sketch;
  std::vector<std::complex<double>> spectrum;

  explicit PrecomputedTs(SketchVec s);
};

PrecomputedTs precompute_ts(const DenseTensor& t, const HashFamily& family);

double estimate_uvw(std::span<const PrecomputedTs> pres, const Eigen::VectorXd& u,
                    const Eigen::VectorXd& v, const Eigen::VectorXd& w);
Eigen::VectorXd estimate_iuv(std::span<const PrecomputedTs> pres,
                             const Eigen::VectorXd& a, const Eigen::VectorXd& b,
                             std::size_t free_mode);
double inner_once_ts(const DenseTensor& a, const DenseTensor& b, const HashFamily& family);

/// Higher-order-count-sketch counterparts: contractions run against the
/// sketched tensor with count-sketched vectors.
struct PrecomputedHcs {
  SketchTensor sketch;

  explicit PrecomputedHcs(SketchTensor s) : sketch(std::move(s)) {}
};

PrecomputedHcs precompute_hcs(const DenseTensor& t, const HashFamily& family);

double estimate_uvw(std::span<const PrecomputedHcs> pres, const Eigen::VectorXd& u,
                    const Eigen::VectorXd& v, const Eigen::VectorXd& w);
Eigen::VectorXd estimate_iuv(std::span<const PrecomputedHcs> pres,
                             const Eigen::VectorXd& a, const Eigen::VectorXd& b,
                             std::size_t free_mode);

/// Long-pair count-sketch counterparts: the baseline that sketches vec(T)
/// with a single full-length pair.
struct PrecomputedCs {
  SketchVec sketch;                 // family holds the one long pair
  std::vector<std::size_t> dims;    // original tensor shape

  PrecomputedCs(SketchVec s, std::vector<std::size_t> d);
};

PrecomputedCs precompute_cs(const DenseTensor& t, const HashPair& long_pair);

double estimate_uvw(std::span<const PrecomputedCs> pres, const Eigen::VectorXd& u,
                    const Eigen::VectorXd& v, const Eigen::VectorXd& w);
Eigen::VectorXd estimate_iuv(std::span<const PrecomputedCs> pres,
                             const Eigen::VectorXd& a, const Eigen::VectorXd& b,
                             std::size_t free_mode);

}  // namespace sketchtensor
