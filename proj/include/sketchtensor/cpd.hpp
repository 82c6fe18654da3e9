#pragma once

#include <Eigen/Dense>

#include <memory>

#include "sketchtensor/estimators.hpp"
#include "sketchtensor/tensor.hpp"

namespace sketchtensor {

enum class SketchBackend { Plain, CS, TS, HCS, FCS };

const char* backend_name(SketchBackend backend);
SketchBackend backend_from_name(const std::string& name);

/// Provides the order-3 contractions the decomposition algorithms consume,
/// either exactly (Plain) or as sketched estimates. Deflation updates the
/// underlying representation in place; sketch backends deflate in sketch
/// space through linearity.
class ContractionEngine {
 public:
  virtual ~ContractionEngine() = default;

  /// T(u, v, w).
  virtual double uvw(const Eigen::VectorXd& u, const Eigen::VectorXd& v,
                     const Eigen::VectorXd& w) const = 0;

  /// Contraction with the identity at free_mode, (a, b) on the other modes.
  virtual Eigen::VectorXd iuv(const Eigen::VectorXd& a, const Eigen::VectorXd& b,
                              std::size_t free_mode) const = 0;

  /// T <- T - weight * u o v o w.
  virtual void deflate(double weight, const Eigen::VectorXd& u,
                       const Eigen::VectorXd& v, const Eigen::VectorXd& w) = 0;

  double uuu(const Eigen::VectorXd& u) const { return uvw(u, u, u); }
  Eigen::VectorXd iuu(const Eigen::VectorXd& u) const { return iuv(u, u, 0); }

  virtual std::vector<std::size_t> shape() const = 0;
};

/// Builds the engine for a backend; sketch backends consume the tensor once
/// (their sketches are built here) and never touch it again.
std::unique_ptr<ContractionEngine> make_contraction_engine(const DenseTensor& t,
                                                           SketchBackend backend,
                                                           const EstimatorConfig& cfg);

struct RtpmConfig {
  std::size_t target_rank = 1;
  std::size_t num_inits = 15;
  std::size_t num_power_iters = 20;
  SketchBackend backend = SketchBackend::Plain;
  EstimatorConfig estimator;
};

struct AlsConfig {
  std::size_t target_rank = 1;
  std::size_t max_iters = 50;
  SketchBackend backend = SketchBackend::Plain;
  EstimatorConfig estimator;
  double tol = 1e-8;  // stop when the relative residual changes less than this
};

/// Robust tensor power method for symmetric (cubical) order-3 tensors:
/// per component, the best of num_inits random starts after
/// num_power_iters power iterations is refined, its weight recorded, and
/// the component deflated. Factor columns are unit vectors; weights carry
/// the (possibly negative) contraction value.
CpTensor rtpm(const DenseTensor& t, const RtpmConfig& cfg);

/// Alternating rank-1 update variant for general order-3 tensors.
CpTensor rtpm_asym(const DenseTensor& t, const RtpmConfig& cfg);

/// Alternating least squares; under sketch backends every
/// matricized-tensor-times-Khatri-Rao column is replaced by the engine's
/// contraction estimate while the Gram solves stay exact.
CpTensor als(const DenseTensor& t, const AlsConfig& cfg);

/// || t - densify(cp) ||_F / || t ||_F.
double residual_norm(const DenseTensor& t, const CpTensor& cp);

/// 10 log10(peak^2 / MSE) with peak = max |reference|, capped at 99 dB.
double psnr(const DenseTensor& reference, const DenseTensor& estimate);

}  // namespace sketchtensor
