#include "sketchtensor/cpd.hpp"

#include <cmath>
#include <stdexcept>

#include "sketchtensor/rng.hpp"

namespace sketchtensor {

const char* backend_name(SketchBackend backend) {
  switch (backend) {
    case SketchBackend::Plain: return "plain";
    case SketchBackend::CS: return "cs";
    case SketchBackend::TS: return "ts";
    case SketchBackend::HCS: return "hcs";
    case SketchBackend::FCS: return "fcs";
  }
  return "unknown";
}

SketchBackend backend_from_name(const std::string& name) {
  if (name == "plain") return SketchBackend::Plain;
  if (name == "cs") return SketchBackend::CS;
  if (name == "ts") return SketchBackend::TS;
  if (name == "hcs") return SketchBackend::HCS;
  if (name == "fcs") return SketchBackend::FCS;
  throw std::invalid_argument("unknown backend: " + name);
}

namespace {

void require_order3(const DenseTensor& t, const char* op) {
  if (t.order() != 3) throw std::invalid_argument(std::string(op) + ": order-3 tensor required");
}

class PlainEngine final : public ContractionEngine {
 public:
  explicit PlainEngine(DenseTensor t) : tensor_(std::move(t)) {}

  double uvw(const Eigen::VectorXd& u, const Eigen::VectorXd& v,
             const Eigen::VectorXd& w) const override {
    return contract3(tensor_, u, v, w);
  }

  Eigen::VectorXd iuv(const Eigen::VectorXd& a, const Eigen::VectorXd& b,
                      std::size_t free_mode) const override {
    return contract3_free(tensor_, a, b, free_mode);
  }

  void deflate(double weight, const Eigen::VectorXd& u, const Eigen::VectorXd& v,
               const Eigen::VectorXd& w) override {
    tensor_ -= densify(rank_one(weight, {u, v, w}));
  }

  std::vector<std::size_t> shape() const override { return tensor_.shape(); }

 private:
  DenseTensor tensor_;
};

class FcsEngine final : public ContractionEngine {
 public:
  FcsEngine(const DenseTensor& t, const EstimatorConfig& cfg) : shape_(t.shape()) {
    for (const HashFamily& family : families_for(t.shape(), cfg)) {
      pres_.push_back(precompute_fcs(t, family));
    }
  }

  double uvw(const Eigen::VectorXd& u, const Eigen::VectorXd& v,
             const Eigen::VectorXd& w) const override {
    return estimate_uvw(std::span<const PrecomputedFcs>(pres_), u, v, w);
  }

  Eigen::VectorXd iuv(const Eigen::VectorXd& a, const Eigen::VectorXd& b,
                      std::size_t free_mode) const override {
    return estimate_iuv(std::span<const PrecomputedFcs>(pres_), a, b, free_mode);
  }

  void deflate(double weight, const Eigen::VectorXd& u, const Eigen::VectorXd& v,
               const Eigen::VectorXd& w) override {
    const CpTensor component = rank_one(weight, {u, v, w});
    for (PrecomputedFcs& pre : pres_) {
      SketchVec updated = pre.sketch;
      updated.values -= fcs_sketch(component, updated.family).values;
      pre = PrecomputedFcs(std::move(updated));
    }
  }

  std::vector<std::size_t> shape() const override { return shape_; }

 private:
  std::vector<std::size_t> shape_;
  std::vector<PrecomputedFcs> pres_;
};

class TsEngine final : public ContractionEngine {
 public:
  TsEngine(const DenseTensor& t, const EstimatorConfig& cfg) : shape_(t.shape()) {
    for (const HashFamily& family : families_for(t.shape(), cfg)) {
      pres_.push_back(precompute_ts(t, family));
    }
  }

  double uvw(const Eigen::VectorXd& u, const Eigen::VectorXd& v,
             const Eigen::VectorXd& w) const override {
    return estimate_uvw(std::span<const PrecomputedTs>(pres_), u, v, w);
  }

  Eigen::VectorXd iuv(const Eigen::VectorXd& a, const Eigen::VectorXd& b,
                      std::size_t free_mode) const override {
    return estimate_iuv(std::span<const PrecomputedTs>(pres_), a, b, free_mode);
  }

  void deflate(double weight, const Eigen::VectorXd& u, const Eigen::VectorXd& v,
               const Eigen::VectorXd& w) override {
    const CpTensor component = rank_one(weight, {u, v, w});
    for (PrecomputedTs& pre : pres_) {
      SketchVec updated = pre.sketch;
      updated.values -= ts_sketch(component, updated.family).values;
      pre = PrecomputedTs(std::move(updated));
    }
  }

  std::vector<std::size_t> shape() const override { return shape_; }

 private:
  std::vector<std::size_t> shape_;
  std::vector<PrecomputedTs> pres_;
};

class HcsEngine final : public ContractionEngine {
 public:
  HcsEngine(const DenseTensor& t, const EstimatorConfig& cfg) : shape_(t.shape()) {
    for (const HashFamily& family : families_for(t.shape(), cfg)) {
      pres_.push_back(precompute_hcs(t, family));
    }
  }

  double uvw(const Eigen::VectorXd& u, const Eigen::VectorXd& v,
             const Eigen::VectorXd& w) const override {
    return estimate_uvw(std::span<const PrecomputedHcs>(pres_), u, v, w);
  }

  Eigen::VectorXd iuv(const Eigen::VectorXd& a, const Eigen::VectorXd& b,
                      std::size_t free_mode) const override {
    return estimate_iuv(std::span<const PrecomputedHcs>(pres_), a, b, free_mode);
  }

  void deflate(double weight, const Eigen::VectorXd& u, const Eigen::VectorXd& v,
               const Eigen::VectorXd& w) override {
    const CpTensor component = rank_one(weight, {u, v, w});
    for (PrecomputedHcs& pre : pres_) {
      pre.sketch.values -= hcs_sketch(component, pre.sketch.family).values;
    }
  }

  std::vector<std::size_t> shape() const override { return shape_; }

 private:
  std::vector<std::size_t> shape_;
  std::vector<PrecomputedHcs> pres_;
};

class CsEngine final : public ContractionEngine {
 public:
  CsEngine(const DenseTensor& t, const EstimatorConfig& cfg) : shape_(t.shape()) {
    for (std::size_t d = 0; d < cfg.sketch_count; ++d) {
      const HashPair long_pair(t.size(), cfg.hash_len, family_seed(cfg.seed, d));
      pres_.push_back(precompute_cs(t, long_pair));
    }
  }

  double uvw(const Eigen::VectorXd& u, const Eigen::VectorXd& v,
             const Eigen::VectorXd& w) const override {
    return estimate_uvw(std::span<const PrecomputedCs>(pres_), u, v, w);
  }

  Eigen::VectorXd iuv(const Eigen::VectorXd& a, const Eigen::VectorXd& b,
                      std::size_t free_mode) const override {
    return estimate_iuv(std::span<const PrecomputedCs>(pres_), a, b, free_mode);
  }

  void deflate(double weight, const Eigen::VectorXd& u, const Eigen::VectorXd& v,
               const Eigen::VectorXd& w) override {
    const DenseTensor component = densify(rank_one(weight, {u, v, w}));
    for (PrecomputedCs& pre : pres_) {
      pre.sketch.values -=
          cs_sketch(component.vec(), pre.sketch.family.pair(0)).values;
    }
  }

  std::vector<std::size_t> shape() const override { return shape_; }

 private:
  std::vector<std::size_t> shape_;
  std::vector<PrecomputedCs> pres_;
};

Eigen::VectorXd random_unit(SplitMix64& rng, std::size_t dim) {
  Eigen::VectorXd v(static_cast<Eigen::Index>(dim));
  for (Eigen::Index i = 0; i < v.size(); ++i) v[i] = rng.next_gaussian();
  const double norm = v.norm();
  return norm > 0 ? Eigen::VectorXd(v / norm) : v;
}

// Normalize in place; returns false (leaving a zero vector) when the norm
// underflows, which happens on an exactly deflated-to-zero tensor.
bool normalize_or_zero(Eigen::VectorXd& v) {
  const double norm = v.norm();
  if (norm < 1e-150) {
    v.setZero();
    return false;
  }
  v /= norm;
  return true;
}

}  // namespace

std::unique_ptr<ContractionEngine> make_contraction_engine(const DenseTensor& t,
                                                           SketchBackend backend,
                                                           const EstimatorConfig& cfg) {
  require_order3(t, "make_contraction_engine");
  switch (backend) {
    case SketchBackend::Plain: return std::make_unique<PlainEngine>(t);
    case SketchBackend::CS: return std::make_unique<CsEngine>(t, cfg);
    case SketchBackend::TS: return std::make_unique<TsEngine>(t, cfg);
    case SketchBackend::HCS: return std::make_unique<HcsEngine>(t, cfg);
    case SketchBackend::FCS: return std::make_unique<FcsEngine>(t, cfg);
  }
  throw std::invalid_argument("make_contraction_engine: unknown backend");
}

CpTensor rtpm(const DenseTensor& t, const RtpmConfig& cfg) {
  require_order3(t, "rtpm");
  const std::vector<std::size_t>& dims = t.shape();
  if (dims[0] != dims[1] || dims[1] != dims[2]) {
    throw std::invalid_argument("rtpm: cubical tensor required");
  }
  if (cfg.target_rank == 0 || cfg.num_inits == 0 || cfg.num_power_iters == 0) {
    throw std::invalid_argument("rtpm: rank, inits, and iterations must be >= 1");
  }
  const std::size_t dim = dims[0];
  auto engine = make_contraction_engine(t, cfg.backend, cfg.estimator);
  SplitMix64 init_rng(SplitMix64::mix(cfg.estimator.seed ^ 0x7274706dULL));

  Eigen::VectorXd weights(static_cast<Eigen::Index>(cfg.target_rank));
  Eigen::MatrixXd factor(static_cast<Eigen::Index>(dim),
                         static_cast<Eigen::Index>(cfg.target_rank));
  for (std::size_t r = 0; r < cfg.target_rank; ++r) {
    Eigen::VectorXd best;
    double best_value = -std::numeric_limits<double>::infinity();
    for (std::size_t l = 0; l < cfg.num_inits; ++l) {
      Eigen::VectorXd u = random_unit(init_rng, dim);
      for (std::size_t it = 0; it < cfg.num_power_iters; ++it) {
        u = engine->iuu(u);
        if (!normalize_or_zero(u)) break;
      }
      const double value = engine->uuu(u);
      if (value > best_value) {
        best_value = value;
        best = u;
      }
    }
    // Refinement pass on the winning candidate.
    for (std::size_t it = 0; it < cfg.num_power_iters; ++it) {
      Eigen::VectorXd next = engine->iuu(best);
      if (!normalize_or_zero(next)) break;
      best = next;
    }
    const double weight = engine->uuu(best);
    weights[static_cast<Eigen::Index>(r)] = weight;
    factor.col(static_cast<Eigen::Index>(r)) = best;
    engine->deflate(weight, best, best, best);
  }
  return CpTensor(std::move(weights), {factor, factor, factor});
}

CpTensor rtpm_asym(const DenseTensor& t, const RtpmConfig& cfg) {
  require_order3(t, "rtpm_asym");
  if (cfg.target_rank == 0 || cfg.num_inits == 0 || cfg.num_power_iters == 0) {
    throw std::invalid_argument("rtpm_asym: rank, inits, and iterations must be >= 1");
  }
  const std::vector<std::size_t>& dims = t.shape();
  auto engine = make_contraction_engine(t, cfg.backend, cfg.estimator);
  SplitMix64 init_rng(SplitMix64::mix(cfg.estimator.seed ^ 0x72743161ULL));

  Eigen::VectorXd weights(static_cast<Eigen::Index>(cfg.target_rank));
  std::vector<Eigen::MatrixXd> factors(3);
  for (std::size_t n = 0; n < 3; ++n) {
    factors[n].resize(static_cast<Eigen::Index>(dims[n]),
                      static_cast<Eigen::Index>(cfg.target_rank));
  }
  for (std::size_t r = 0; r < cfg.target_rank; ++r) {
    std::array<Eigen::VectorXd, 3> best;
    double best_value = -std::numeric_limits<double>::infinity();
    for (std::size_t l = 0; l < cfg.num_inits; ++l) {
      std::array<Eigen::VectorXd, 3> vecs = {random_unit(init_rng, dims[0]),
                                             random_unit(init_rng, dims[1]),
                                             random_unit(init_rng, dims[2])};
      for (std::size_t it = 0; it < cfg.num_power_iters; ++it) {
        vecs[0] = engine->iuv(vecs[1], vecs[2], 0);
        normalize_or_zero(vecs[0]);
        vecs[1] = engine->iuv(vecs[0], vecs[2], 1);
        normalize_or_zero(vecs[1]);
        vecs[2] = engine->iuv(vecs[0], vecs[1], 2);
        normalize_or_zero(vecs[2]);
      }
      const double value = std::abs(engine->uvw(vecs[0], vecs[1], vecs[2]));
      if (value > best_value) {
        best_value = value;
        best = vecs;
      }
    }
    for (std::size_t it = 0; it < cfg.num_power_iters; ++it) {
      best[0] = engine->iuv(best[1], best[2], 0);
      normalize_or_zero(best[0]);
      best[1] = engine->iuv(best[0], best[2], 1);
      normalize_or_zero(best[1]);
      best[2] = engine->iuv(best[0], best[1], 2);
      normalize_or_zero(best[2]);
    }
    double weight = engine->uvw(best[0], best[1], best[2]);
    if (weight < 0) {  // absorb the sign so weights stay nonnegative
      best[0] = -best[0];
      weight = -weight;
    }
    weights[static_cast<Eigen::Index>(r)] = weight;
    for (std::size_t n = 0; n < 3; ++n) {
      factors[n].col(static_cast<Eigen::Index>(r)) = best[n];
    }
    engine->deflate(weight, best[0], best[1], best[2]);
  }
  return CpTensor(std::move(weights), std::move(factors));
}

CpTensor als(const DenseTensor& t, const AlsConfig& cfg) {
  require_order3(t, "als");
  if (cfg.target_rank == 0 || cfg.max_iters == 0) {
    throw std::invalid_argument("als: rank and iterations must be >= 1");
  }
  const std::vector<std::size_t>& dims = t.shape();
  const auto rank = static_cast<Eigen::Index>(cfg.target_rank);
  auto engine = make_contraction_engine(t, cfg.backend, cfg.estimator);
  SplitMix64 init_rng(SplitMix64::mix(cfg.estimator.seed ^ 0x616c73ULL));

  std::vector<Eigen::MatrixXd> factors(3);
  for (std::size_t n = 0; n < 3; ++n) {
    factors[n].resize(static_cast<Eigen::Index>(dims[n]), rank);
    for (Eigen::Index r = 0; r < rank; ++r) {
      factors[n].col(r) = random_unit(init_rng, dims[n]);
    }
  }
  Eigen::VectorXd weights = Eigen::VectorXd::Ones(rank);

  double prev_residual = std::numeric_limits<double>::infinity();
  for (std::size_t sweep = 0; sweep < cfg.max_iters; ++sweep) {
    for (std::size_t mode = 0; mode < 3; ++mode) {
      const std::size_t o1 = mode == 0 ? 1 : 0;
      const std::size_t o2 = mode == 2 ? 1 : 2;
      // The update absorbs all scale into this mode, so the contracted
      // factors enter unweighted and the previous weights are discarded.
      Eigen::MatrixXd mttkrp(static_cast<Eigen::Index>(dims[mode]), rank);
      for (Eigen::Index r = 0; r < rank; ++r) {
        mttkrp.col(r) = engine->iuv(factors[o1].col(r), factors[o2].col(r), mode);
      }
      Eigen::MatrixXd gram =
          (factors[o1].transpose() * factors[o1])
              .cwiseProduct(factors[o2].transpose() * factors[o2]);
      factors[mode] =
          gram.completeOrthogonalDecomposition().solve(mttkrp.transpose()).transpose();
      for (Eigen::Index r = 0; r < rank; ++r) {
        const double norm = factors[mode].col(r).norm();
        weights[r] = norm;
        if (norm > 1e-150) factors[mode].col(r) /= norm;
      }
    }
    const double residual = residual_norm(t, CpTensor(weights, factors));
    if (std::abs(prev_residual - residual) < cfg.tol) break;
    prev_residual = residual;
  }
  return CpTensor(std::move(weights), std::move(factors));
}

double residual_norm(const DenseTensor& t, const CpTensor& cp) {
  DenseTensor diff = densify(cp);
  diff -= t;
  const double denom = t.frobenius_norm();
  const double num = diff.frobenius_norm();
  if (denom == 0.0) return num == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
  return num / denom;
}

double psnr(const DenseTensor& reference, const DenseTensor& estimate) {
  if (reference.shape() != estimate.shape()) {
    throw std::invalid_argument("psnr: shape mismatch");
  }
  const double peak = reference.vec().cwiseAbs().maxCoeff();
  const double mse =
      (reference.vec() - estimate.vec()).squaredNorm() / static_cast<double>(reference.size());
  if (mse == 0.0) return 99.0;
  return std::min(10.0 * std::log10(peak * peak / mse), 99.0);
}

}  // namespace sketchtensor
