#include "sketchtensor/estimators.hpp"

#include <algorithm>
#include <stdexcept>

#include "sketchtensor/fft.hpp"

namespace sketchtensor {

namespace {

std::span<const double> as_span(const Eigen::VectorXd& v) {
  return {v.data(), static_cast<std::size_t>(v.size())};
}

void require_order3(const HashFamily& family, const char* op) {
  if (family.modes() != 3) {
    throw std::invalid_argument(std::string(op) + ": order-3 family required");
  }
}

// The two contracted modes (in mode order) for a given free mode.
std::pair<std::size_t, std::size_t> contracted_modes(std::size_t free_mode,
                                                     const char* op) {
  if (free_mode > 2) throw std::invalid_argument(std::string(op) + ": mode out of range");
  const std::size_t c1 = free_mode == 0 ? 1 : 0;
  const std::size_t c2 = free_mode == 2 ? 1 : 2;
  return {c1, c2};
}

void require_length(const Eigen::VectorXd& v, const HashPair& pair, const char* op) {
  if (static_cast<std::size_t>(v.size()) != pair.input_dim()) {
    throw std::invalid_argument(std::string(op) + ": vector length mismatch");
  }
}

// <sketch, F^-1(G)> computed in the spectral domain via Parseval.
double spectral_dot(const std::vector<std::complex<double>>& sketch_spectrum,
                    const std::vector<std::complex<double>>& g) {
  double acc = 0.0;
  for (std::size_t k = 0; k < g.size(); ++k) {
    acc += (sketch_spectrum[k] * std::conj(g[k])).real();
  }
  return acc / static_cast<double>(g.size());
}

// Shared core of the sign*z[bucket] readout (per spectral sketches).
template <typename Pre>
double uvw_spectral(const Pre& pre, const Eigen::VectorXd& u, const Eigen::VectorXd& v,
                    const Eigen::VectorXd& w, std::size_t n) {
  const HashFamily& family = pre.sketch.family;
  require_order3(family, "estimate_uvw");
  require_length(u, family.pair(0), "estimate_uvw");
  require_length(v, family.pair(1), "estimate_uvw");
  require_length(w, family.pair(2), "estimate_uvw");
  const Eigen::VectorXd cs_u = cs_sketch(u, family.pair(0)).values;
  const Eigen::VectorXd cs_v = cs_sketch(v, family.pair(1)).values;
  const Eigen::VectorXd cs_w = cs_sketch(w, family.pair(2)).values;
  std::vector<std::complex<double>> g = dft(as_span(cs_u), n);
  const std::vector<std::complex<double>> fv = dft(as_span(cs_v), n);
  const std::vector<std::complex<double>> fw = dft(as_span(cs_w), n);
  for (std::size_t k = 0; k < n; ++k) g[k] *= fv[k] * fw[k];
  return spectral_dot(pre.spectrum, g);
}

template <typename Pre>
Eigen::VectorXd iuv_spectral(const Pre& pre, const Eigen::VectorXd& a,
                             const Eigen::VectorXd& b, std::size_t free_mode,
                             std::size_t n) {
  const HashFamily& family = pre.sketch.family;
  require_order3(family, "estimate_iuv");
  const auto [c1, c2] = contracted_modes(free_mode, "estimate_iuv");
  require_length(a, family.pair(c1), "estimate_iuv");
  require_length(b, family.pair(c2), "estimate_iuv");
  const Eigen::VectorXd cs_a = cs_sketch(a, family.pair(c1)).values;
  const Eigen::VectorXd cs_b = cs_sketch(b, family.pair(c2)).values;
  const std::vector<std::complex<double>> fa = dft(as_span(cs_a), n);
  const std::vector<std::complex<double>> fb = dft(as_span(cs_b), n);
  std::vector<std::complex<double>> g(n);
  for (std::size_t k = 0; k < n; ++k) {
    g[k] = pre.spectrum[k] * std::conj(fa[k]) * std::conj(fb[k]);
  }
  const std::vector<double> z = idft_real(g);
  const HashPair& free_pair = family.pair(free_mode);
  Eigen::VectorXd out(static_cast<Eigen::Index>(free_pair.input_dim()));
  for (std::size_t i = 0; i < free_pair.input_dim(); ++i) {
    out[static_cast<Eigen::Index>(i)] = free_pair.sign(i) * z[free_pair.bucket(i)];
  }
  return out;
}

template <typename Pre, typename Fn>
auto median_over(std::span<const Pre> pres, Fn&& one) {
  if (pres.empty()) throw std::invalid_argument("estimator: no sketches");
  using Result = decltype(one(pres[0]));
  std::vector<Result> results;
  results.reserve(pres.size());
  for (const Pre& pre : pres) results.push_back(one(pre));
  return median_reduce(std::move(results));
}

}  // namespace

std::vector<HashFamily> families_for(const std::vector<std::size_t>& dims,
                                     const EstimatorConfig& cfg) {
  if (cfg.hash_len == 0 || cfg.sketch_count == 0) {
    throw std::invalid_argument("EstimatorConfig: hash_len and sketch_count must be >= 1");
  }
  std::vector<HashFamily> families;
  families.reserve(cfg.sketch_count);
  for (std::size_t d = 0; d < cfg.sketch_count; ++d) {
    families.emplace_back(dims, cfg.hash_len, family_seed(cfg.seed, d));
  }
  return families;
}

double median_reduce(std::vector<double> values) {
  if (values.empty()) throw std::invalid_argument("median_reduce: empty input");
  std::sort(values.begin(), values.end());
  const std::size_t n = values.size();
  if (n % 2 == 1) return values[n / 2];
  return 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

Eigen::VectorXd median_reduce(const std::vector<Eigen::VectorXd>& values) {
  if (values.empty()) throw std::invalid_argument("median_reduce: empty input");
  const Eigen::Index len = values[0].size();
  for (const Eigen::VectorXd& v : values) {
    if (v.size() != len) throw std::invalid_argument("median_reduce: length mismatch");
  }
  Eigen::VectorXd out(len);
  std::vector<double> column(values.size());
  for (Eigen::Index i = 0; i < len; ++i) {
    for (std::size_t d = 0; d < values.size(); ++d) column[d] = values[d][i];
    out[i] = median_reduce(column);
  }
  return out;
}

PrecomputedFcs::PrecomputedFcs(SketchVec s) : sketch(std::move(s)) {
  if (sketch.kind != SketchKind::FCS) {
    throw std::invalid_argument("PrecomputedFcs: FCS sketch required");
  }
  spectrum = dft(as_span(sketch.values), sketch.family.composed_len());
}

PrecomputedFcs precompute_fcs(const DenseTensor& t, const HashFamily& family) {
  return PrecomputedFcs(fcs_sketch(t, family));
}

Eigen::VectorXd precompute_z(const PrecomputedFcs& pre, const Eigen::VectorXd& a,
                             const Eigen::VectorXd& b, std::size_t free_mode) {
  const HashFamily& family = pre.sketch.family;
  require_order3(family, "precompute_z");
  const std::size_t n = family.composed_len();
  const auto [c1, c2] = contracted_modes(free_mode, "precompute_z");
  const Eigen::VectorXd cs_a = cs_sketch(a, family.pair(c1)).values;
  const Eigen::VectorXd cs_b = cs_sketch(b, family.pair(c2)).values;
  const std::vector<std::complex<double>> fa = dft(as_span(cs_a), n);
  const std::vector<std::complex<double>> fb = dft(as_span(cs_b), n);
  std::vector<std::complex<double>> g(n);
  for (std::size_t k = 0; k < n; ++k) {
    g[k] = pre.spectrum[k] * std::conj(fa[k]) * std::conj(fb[k]);
  }
  const std::vector<double> z = idft_real(g);
  return Eigen::Map<const Eigen::VectorXd>(z.data(), static_cast<Eigen::Index>(z.size()));
}

double estimate_uvw(std::span<const PrecomputedFcs> pres, const Eigen::VectorXd& u,
                    const Eigen::VectorXd& v, const Eigen::VectorXd& w) {
  return median_over(pres, [&](const PrecomputedFcs& pre) {
    return uvw_spectral(pre, u, v, w, pre.sketch.family.composed_len());
  });
}

double estimate_uuu(std::span<const PrecomputedFcs> pres, const Eigen::VectorXd& u) {
  return estimate_uvw(pres, u, u, u);
}

Eigen::VectorXd estimate_iuv(std::span<const PrecomputedFcs> pres,
                             const Eigen::VectorXd& a, const Eigen::VectorXd& b,
                             std::size_t free_mode) {
  return median_over(pres, [&](const PrecomputedFcs& pre) {
    return iuv_spectral(pre, a, b, free_mode, pre.sketch.family.composed_len());
  });
}

Eigen::VectorXd estimate_iuu(std::span<const PrecomputedFcs> pres,
                             const Eigen::VectorXd& u) {
  return estimate_iuv(pres, u, u, 0);
}

double inner_once(const DenseTensor& a, const DenseTensor& b, const HashFamily& family) {
  if (a.shape() != b.shape()) throw std::invalid_argument("inner_once: shape mismatch");
  return fcs_sketch(a, family).values.dot(fcs_sketch(b, family).values);
}

double estimate_inner(const DenseTensor& a, const DenseTensor& b,
                      const EstimatorConfig& cfg) {
  if (a.shape() != b.shape()) throw std::invalid_argument("estimate_inner: shape mismatch");
  std::vector<double> estimates;
  estimates.reserve(cfg.sketch_count);
  for (const HashFamily& family : families_for(a.shape(), cfg)) {
    estimates.push_back(inner_once(a, b, family));
  }
  return median_reduce(std::move(estimates));
}

PrecomputedTs::PrecomputedTs(SketchVec s) : sketch(std::move(s)) {
  if (sketch.kind != SketchKind::TS) {
    throw std::invalid_argument("PrecomputedTs: TS sketch required");
  }
  spectrum = dft(as_span(sketch.values), static_cast<std::size_t>(sketch.values.size()));
}

PrecomputedTs precompute_ts(const DenseTensor& t, const HashFamily& family) {
  return PrecomputedTs(ts_sketch(t, family));
}

double estimate_uvw(std::span<const PrecomputedTs> pres, const Eigen::VectorXd& u,
                    const Eigen::VectorXd& v, const Eigen::VectorXd& w) {
  return median_over(pres, [&](const PrecomputedTs& pre) {
    return uvw_spectral(pre, u, v, w, pre.spectrum.size());
  });
}

Eigen::VectorXd estimate_iuv(std::span<const PrecomputedTs> pres,
                             const Eigen::VectorXd& a, const Eigen::VectorXd& b,
                             std::size_t free_mode) {
  return median_over(pres, [&](const PrecomputedTs& pre) {
    return iuv_spectral(pre, a, b, free_mode, pre.spectrum.size());
  });
}

double inner_once_ts(const DenseTensor& a, const DenseTensor& b,
                     const HashFamily& family) {
  if (a.shape() != b.shape()) throw std::invalid_argument("inner_once_ts: shape mismatch");
  return ts_sketch(a, family).values.dot(ts_sketch(b, family).values);
}

PrecomputedHcs precompute_hcs(const DenseTensor& t, const HashFamily& family) {
  return PrecomputedHcs(hcs_sketch(t, family));
}

double estimate_uvw(std::span<const PrecomputedHcs> pres, const Eigen::VectorXd& u,
                    const Eigen::VectorXd& v, const Eigen::VectorXd& w) {
  return median_over(pres, [&](const PrecomputedHcs& pre) {
    const HashFamily& family = pre.sketch.family;
    require_order3(family, "estimate_uvw");
    return contract3(pre.sketch.values, cs_sketch(u, family.pair(0)).values,
                     cs_sketch(v, family.pair(1)).values,
                     cs_sketch(w, family.pair(2)).values);
  });
}

Eigen::VectorXd estimate_iuv(std::span<const PrecomputedHcs> pres,
                             const Eigen::VectorXd& a, const Eigen::VectorXd& b,
                             std::size_t free_mode) {
  return median_over(pres, [&](const PrecomputedHcs& pre) {
    const HashFamily& family = pre.sketch.family;
    require_order3(family, "estimate_iuv");
    const auto [c1, c2] = contracted_modes(free_mode, "estimate_iuv");
    const Eigen::VectorXd w = contract3_free(pre.sketch.values,
                                             cs_sketch(a, family.pair(c1)).values,
                                             cs_sketch(b, family.pair(c2)).values,
                                             free_mode);
    const HashPair& free_pair = family.pair(free_mode);
    Eigen::VectorXd out(static_cast<Eigen::Index>(free_pair.input_dim()));
    for (std::size_t i = 0; i < free_pair.input_dim(); ++i) {
      out[static_cast<Eigen::Index>(i)] =
          free_pair.sign(i) * w[static_cast<Eigen::Index>(free_pair.bucket(i))];
    }
    return out;
  });
}

PrecomputedCs::PrecomputedCs(SketchVec s, std::vector<std::size_t> d)
    : sketch(std::move(s)), dims(std::move(d)) {
  std::size_t total = 1;
  for (std::size_t dim : dims) total *= dim;
  if (sketch.family.modes() != 1 || sketch.family.pair(0).input_dim() != total) {
    throw std::invalid_argument("PrecomputedCs: long pair does not cover the shape");
  }
}

PrecomputedCs precompute_cs(const DenseTensor& t, const HashPair& long_pair) {
  return PrecomputedCs(cs_sketch(t.vec(), long_pair), t.shape());
}

double estimate_uvw(std::span<const PrecomputedCs> pres, const Eigen::VectorXd& u,
                    const Eigen::VectorXd& v, const Eigen::VectorXd& w) {
  return median_over(pres, [&](const PrecomputedCs& pre) {
    if (pre.dims.size() != 3) {
      throw std::invalid_argument("estimate_uvw: order-3 shape required");
    }
    const std::size_t d0 = pre.dims[0], d1 = pre.dims[1];
    const HashPair& pair = pre.sketch.family.pair(0);
    const Eigen::VectorXd& sk = pre.sketch.values;
    double acc = 0.0;
    for (Eigen::Index k = 0; k < w.size(); ++k) {
      if (w[k] == 0.0) continue;
      for (Eigen::Index j = 0; j < v.size(); ++j) {
        const double vw = v[j] * w[k];
        if (vw == 0.0) continue;
        const std::size_t base =
            static_cast<std::size_t>(j) * d0 + static_cast<std::size_t>(k) * d0 * d1;
        for (Eigen::Index i = 0; i < u.size(); ++i) {
          if (u[i] == 0.0) continue;
          const std::size_t l = base + static_cast<std::size_t>(i);
          acc += pair.sign(l) * u[i] * vw * sk[static_cast<Eigen::Index>(pair.bucket(l))];
        }
      }
    }
    return acc;
  });
}

Eigen::VectorXd estimate_iuv(std::span<const PrecomputedCs> pres,
                             const Eigen::VectorXd& a, const Eigen::VectorXd& b,
                             std::size_t free_mode) {
  return median_over(pres, [&](const PrecomputedCs& pre) {
    if (pre.dims.size() != 3) {
      throw std::invalid_argument("estimate_iuv: order-3 shape required");
    }
    const auto [c1, c2] = contracted_modes(free_mode, "estimate_iuv");
    const HashPair& pair = pre.sketch.family.pair(0);
    const Eigen::VectorXd& sk = pre.sketch.values;
    const std::size_t strides[3] = {1, pre.dims[0], pre.dims[0] * pre.dims[1]};
    Eigen::VectorXd out =
        Eigen::VectorXd::Zero(static_cast<Eigen::Index>(pre.dims[free_mode]));
    std::size_t idx[3];
    for (Eigen::Index j = 0; j < a.size(); ++j) {
      if (a[j] == 0.0) continue;
      idx[c1] = static_cast<std::size_t>(j);
      for (Eigen::Index k = 0; k < b.size(); ++k) {
        const double ab = a[j] * b[k];
        if (ab == 0.0) continue;
        idx[c2] = static_cast<std::size_t>(k);
        for (std::size_t i = 0; i < pre.dims[free_mode]; ++i) {
          idx[free_mode] = i;
          const std::size_t l =
              idx[0] * strides[0] + idx[1] * strides[1] + idx[2] * strides[2];
          out[static_cast<Eigen::Index>(i)] +=
              pair.sign(l) * ab * sk[static_cast<Eigen::Index>(pair.bucket(l))];
        }
      }
    }
    return out;
  });
}

}  // namespace sketchtensor
