#pragma once

// Compactly supported averaging kernels.
//
//   cos:  (1 / 2eps) (1 + cos(pi eta / eps))   on [-eps, eps]
//   k11:  (1 / eps)  (1 - cos(2 pi eta / eps)) on [0, eps]

#include <cmath>
#include <string>
#include <string_view>

#include "cpquad/errors.hpp"
#include "cpquad/vec.hpp"

namespace cpquad {

enum class KernelType { Cosine, K11 };

inline std::string_view kernel_name(KernelType t) { return t == KernelType::Cosine ? "cos" : "k11"; }

inline KernelType parse_kernel(std::string_view name) {
  if (name == "cos") return KernelType::Cosine;
  if (name == "k11") return KernelType::K11;
  throw ConfigError("unknown kernel '" + std::string(name) + "' (expected cos or k11)");
}

struct Kernel {
  KernelType type = KernelType::Cosine;
  double eps = 0.0;

  Kernel(KernelType t, double width) : type(t), eps(width) {
    if (!(eps > 0.0) || !std::isfinite(eps)) throw ConfigError("Kernel: eps must be positive and finite");
  }

  double support_begin() const { return type == KernelType::Cosine ? -eps : 0.0; }
  double support_end() const { return eps; }
};

inline double eval_kernel(const Kernel& k, double eta) {
  if (eta < k.support_begin() || eta > k.support_end()) return 0.0;
  if (k.type == KernelType::Cosine) return (1.0 + std::cos(pi * eta / k.eps)) / (2.0 * k.eps);
  // 1 - cos(2x) = 2 sin^2(x) avoids cancellation near eta = 0.
  const double s = std::sin(pi * eta / k.eps);
  return 2.0 * s * s / k.eps;
}

/// K(d) / d for the codimension-2 formula; continuous with limit 0 at
/// d = 0, which is returned for d < 1e-12.
inline double eval_kernel_over_distance(const Kernel& k, double d) {
  if (k.type != KernelType::K11)
    throw ConfigError("K(d)/d needs a kernel vanishing at 0 (k11)");
  if (d < 0.0) throw std::invalid_argument("eval_kernel_over_distance: negative distance");
  if (d < 1e-12) return 0.0;
  return eval_kernel(k, d) / d;
}

/// Integral of eta K(eta) over [0, eps]; the hemisphere correction of
/// the uncorrected codimension-2 sum is (g(a) + g(b)) times this.
inline double kernel_first_moment(const Kernel& k) {
  if (k.type != KernelType::K11) throw ConfigError("kernel_first_moment: defined for k11 only");
  // K11 is symmetric about eps/2 with unit mass.
  return 0.5 * k.eps;
}

}  // namespace cpquad
