#pragma once

// Uniform Cartesian grids, closest-point fields sampled on them, and the
// narrow band of nodes that carry the quadrature.

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <istream>
#include <limits>
#include <ostream>
#include <string>
#include <type_traits>
#include <vector>

#include "cpquad/errors.hpp"
#include "cpquad/geometry.hpp"
#include "cpquad/parallel.hpp"
#include "cpquad/vec.hpp"

namespace cpquad {

template <int D>
using Index = std::array<int, D>;

/// Isotropic node lattice x = lower + h * index. A grid may also be a
/// window of planes [offset, offset + count(0)) of a larger grid along
/// axis 0; node coordinates are always computed from the parent origin
/// so that a window reproduces its parent's coordinates bit for bit.
template <int D>
class Grid {
 public:
  static_assert(D == 2 || D == 3);
  static constexpr int min_nodes = 8;

  /// n nodes per axis spanning [lower, upper] on every axis.
  static Grid cube(const Vec<D>& lower, const Vec<D>& upper, int n) {
    if (n < min_nodes) throw ConfigError("Grid: need at least 8 nodes per axis, got " + std::to_string(n));
    if (!all_finite(lower) || !all_finite(upper)) throw ConfigError("Grid: non-finite box");
    const double h = (upper[0] - lower[0]) / (n - 1);
    for (int k = 0; k < D; ++k) {
      if (!(upper[k] > lower[k])) throw ConfigError("Grid: upper corner must exceed lower corner");
      const double hk = (upper[k] - lower[k]) / (n - 1);
      if (std::abs(hk - h) > 1e-14) throw ConfigError("Grid: box must give the same spacing on every axis");
    }
    Index<D> counts;
    counts.fill(n);
    return Grid(lower, h, counts, 0);
  }

  /// Cube [lo, hi]^D.
  static Grid cube(double lo, double hi, int n) {
    Vec<D> a, b;
    a.fill(lo);
    b.fill(hi);
    return cube(a, b, n);
  }

  const Vec<D>& origin() const { return origin_; }
  double spacing() const { return h_; }
  int count(int axis) const { return counts_[axis]; }
  const Index<D>& counts() const { return counts_; }
  /// Global axis-0 index of this grid's first plane.
  int offset() const { return offset_; }

  std::size_t size() const {
    std::size_t s = 1;
    for (int c : counts_) s *= static_cast<std::size_t>(c);
    return s;
  }

  std::size_t stride(int axis) const {
    std::size_t s = 1;
    for (int k = D - 1; k > axis; --k) s *= static_cast<std::size_t>(counts_[k]);
    return s;
  }

  std::size_t linear(const Index<D>& idx) const {
    std::size_t lin = 0;
    for (int k = 0; k < D; ++k) lin = lin * counts_[k] + idx[k];
    return lin;
  }

  Index<D> multi_index(std::size_t lin) const {
    Index<D> idx;
    for (int k = D - 1; k >= 0; --k) {
      idx[k] = static_cast<int>(lin % counts_[k]);
      lin /= counts_[k];
    }
    return idx;
  }

  Vec<D> node(const Index<D>& idx) const {
    Vec<D> x;
    for (int k = 0; k < D; ++k) x[k] = origin_[k] + h_ * (idx[k] + (k == 0 ? offset_ : 0));
    return x;
  }

  Vec<D> node(std::size_t lin) const { return node(multi_index(lin)); }

  Vec<D> lower() const {
    Index<D> zero{};
    return node(zero);
  }

  Vec<D> upper() const {
    Index<D> last;
    for (int k = 0; k < D; ++k) last[k] = counts_[k] - 1;
    return node(last);
  }

  /// Sub-grid made of planes [i0, i1) (local indices) along axis 0.
  Grid window(int i0, int i1) const {
    if (i0 < 0 || i1 > counts_[0] || i0 >= i1) throw std::out_of_range("Grid::window: bad plane range");
    Index<D> counts = counts_;
    counts[0] = i1 - i0;
    return Grid(origin_, h_, counts, offset_ + i0);
  }

  /// Whether a full-size grid has n nodes on every axis (cube grids only).
  bool is_cube() const {
    for (int c : counts_)
      if (c != counts_[0]) return false;
    return offset_ == 0;
  }

 private:
  Grid(const Vec<D>& origin, double h, const Index<D>& counts, int offset)
      : origin_(origin), h_(h), counts_(counts), offset_(offset) {}

  Vec<D> origin_;
  double h_;
  Index<D> counts_;
  int offset_;
};

/// Closest points and distances sampled at every node of a grid. Nodes
/// that were skipped as provably far from the shape hold NaN.
template <int D>
struct CpField {
  Grid<D> grid;
  int codim = 1;
  std::vector<double> dist;
  std::vector<Vec<D>> cp;

  bool sampled(std::size_t node) const { return std::isfinite(dist[node]); }
};

/// Nodes of a field carrying nonzero kernel weight.
struct BandIndex {
  std::vector<std::size_t> nodes;  // ascending linear (lexicographic) order
  double eps = 0.0;
  int stencil_radius = 0;
  int codim = 1;
};

struct SampleOptions {
  /// Nodes farther than this from the shape may be skipped (left NaN).
  double cutoff = std::numeric_limits<double>::infinity();
  /// Nodes on the outer faces of the full grid must be at least this far
  /// from the shape.
  double clearance = 0.0;
  int threads = 1;
};

namespace detail {
inline constexpr int tile_edge = 8;
}

/// Samples the planes [i0, i1) of `full` (local indices). Far tiles are
/// culled with one query at the tile centre, using that the distance is
/// 1-Lipschitz.
template <Shape S>
CpField<S::dim> sample_window(const Grid<S::dim>& full, const S& shape, int i0, int i1,
                              const SampleOptions& opt = {}) {
  constexpr int D = S::dim;
  const Grid<D> grid = full.window(i0, i1);
  CpField<D> field{grid, S::codim, std::vector<double>(grid.size()),
                   std::vector<Vec<D>>(grid.size())};
  const double h = grid.spacing();
  Index<D> tiles;
  std::size_t tile_count = 1;
  for (int k = 0; k < D; ++k) {
    tiles[k] = (grid.count(k) + detail::tile_edge - 1) / detail::tile_edge;
    tile_count *= tiles[k];
  }
  const double nan = std::numeric_limits<double>::quiet_NaN();
  Vec<D> nan_vec;
  nan_vec.fill(nan);

  parallel_for(tile_count, opt.threads, [&](std::size_t begin, std::size_t end) {
    for (std::size_t t = begin; t < end; ++t) {
      Index<D> tile;
      std::size_t rem = t;
      for (int k = D - 1; k >= 0; --k) {
        tile[k] = static_cast<int>(rem % tiles[k]);
        rem /= tiles[k];
      }
      Index<D> lo, hi;
      Vec<D> centre;
      double diag2 = 0.0;
      for (int k = 0; k < D; ++k) {
        lo[k] = tile[k] * detail::tile_edge;
        hi[k] = std::min(lo[k] + detail::tile_edge, grid.count(k));
        const double len = (hi[k] - lo[k] - 1) * h;
        diag2 += len * len;
      }
      const Vec<D> a = grid.node(lo);
      Index<D> last;
      for (int k = 0; k < D; ++k) last[k] = hi[k] - 1;
      const Vec<D> b = grid.node(last);
      for (int k = 0; k < D; ++k) centre[k] = 0.5 * (a[k] + b[k]);
      bool skip = false;
      if (std::isfinite(opt.cutoff)) {
        const double dc = std::abs(shape.query(centre).dist);
        skip = dc - 0.5 * std::sqrt(diag2) > opt.cutoff;
      }
      Index<D> idx = lo;
      while (true) {
        const std::size_t lin = grid.linear(idx);
        if (skip) {
          field.dist[lin] = nan;
          field.cp[lin] = nan_vec;
        } else {
          const Projection<D> p = shape.query(grid.node(idx));
          field.dist[lin] = p.dist;
          field.cp[lin] = p.cp;
          if (std::abs(p.dist) < opt.clearance) {
            bool on_face = false;
            for (int k = 0; k < D; ++k) {
              const int shift = k == 0 ? grid.offset() - full.offset() : 0;
              const int g = idx[k] + shift;
              if (g == 0 || g == full.count(k) - 1) on_face = true;
            }
            if (on_face)
              throw GridBoundaryError("sample_field: the shape's band reaches the grid box at node (" +
                                      std::to_string(grid.node(idx)[0]) + ", ...)");
          }
        }
        int k = D - 1;
        while (k >= 0 && ++idx[k] == hi[k]) {
          idx[k] = lo[k];
          --k;
        }
        if (k < 0) break;
      }
    }
  });
  return field;
}

/// Samples the shape's closest-point map on every node of the grid.
template <Shape S>
CpField<S::dim> sample_field(const Grid<S::dim>& grid, const S& shape, const SampleOptions& opt = {}) {
  return sample_window(grid, shape, 0, grid.count(0), opt);
}

namespace detail {

template <int D>
bool interior(const Grid<D>& g, const std::type_identity_t<Index<D>>& idx, int radius) {
  for (int k = 0; k < D; ++k)
    if (idx[k] < radius || idx[k] > g.count(k) - 1 - radius) return false;
  return true;
}

}  // namespace detail

/// Closest point recovered from sampled distances, x - d grad(d), with a
/// central-difference gradient.
template <int D>
Vec<D> cp_from_distance(const CpField<D>& field, std::size_t node) {
  const Grid<D>& g = field.grid;
  const Index<D> idx = g.multi_index(node);
  if (!detail::interior(g, idx, 1)) throw GridBoundaryError("cp_from_distance: node on the grid boundary");
  Vec<D> grad;
  for (int k = 0; k < D; ++k) {
    const std::size_t s = g.stride(k);
    grad[k] = (field.dist[node + s] - field.dist[node - s]) / (2.0 * g.spacing());
  }
  const double gn = norm(grad);
  if (!(std::abs(gn - 1.0) <= 0.1))
    throw SingularPointError("cp_from_distance: |grad d| = " + std::to_string(gn) +
                             " far from 1 (medial axis or kink nearby)");
  return g.node(idx) - field.dist[node] * grad;
}

namespace detail {

template <int D>
std::vector<std::size_t> band_nodes(const CpField<D>& field, double eps, int stencil_radius) {
  std::vector<std::size_t> out;
  const Grid<D>& g = field.grid;
  const std::size_t n = g.size();
  for (std::size_t i = 0; i < n; ++i) {
    const double d = field.dist[i];
    if (!std::isfinite(d)) continue;
    const bool in = field.codim == 1 ? std::abs(d) < eps : (d >= 0.0 && d < eps);
    if (in && interior(g, g.multi_index(i), stencil_radius)) out.push_back(i);
  }
  return out;
}

}  // namespace detail

/// Nodes with |d| < eps (codim 1) or 0 <= d < eps (codim 2), excluding
/// nodes closer than `stencil_radius` to the edge of the field's grid.
template <int D>
BandIndex extract_band(const CpField<D>& field, double eps, int stencil_radius) {
  if (!(eps > 0.0)) throw ConfigError("extract_band: eps must be positive");
  BandIndex band{detail::band_nodes(field, eps, stencil_radius), eps, stencil_radius, field.codim};
  if (band.nodes.empty())
    throw EmptyBandError("extract_band: no grid node within eps = " + std::to_string(eps) +
                         " of the shape (grid too coarse or eps too small)");
  return band;
}

// ---------------------------------------------------------------------------
// Binary dump: int32 dim, int32 n, float64 lower[dim], float64 upper[dim],
// int32 codim, then n^dim float64 distances followed by each closest-point
// component, all row-major (last axis fastest) and little-endian.
// ---------------------------------------------------------------------------

namespace detail {

template <class T>
void write_le(std::ostream& os, T value) {
  unsigned char bytes[sizeof(T)];
  std::memcpy(bytes, &value, sizeof(T));
  if constexpr (std::endian::native == std::endian::big) std::reverse(bytes, bytes + sizeof(T));
  os.write(reinterpret_cast<const char*>(bytes), sizeof(T));
}

template <class T>
T read_le(std::istream& is) {
  unsigned char bytes[sizeof(T)];
  is.read(reinterpret_cast<char*>(bytes), sizeof(T));
  if (!is) throw std::runtime_error("read_field: truncated stream");
  if constexpr (std::endian::native == std::endian::big) std::reverse(bytes, bytes + sizeof(T));
  T value;
  std::memcpy(&value, bytes, sizeof(T));
  return value;
}

}  // namespace detail

template <int D>
void write_field(std::ostream& os, const CpField<D>& field) {
  const Grid<D>& g = field.grid;
  if (!g.is_cube()) throw std::invalid_argument("write_field: only full cube grids can be written");
  detail::write_le<std::int32_t>(os, D);
  detail::write_le<std::int32_t>(os, g.count(0));
  for (double v : g.lower()) detail::write_le(os, v);
  for (double v : g.upper()) detail::write_le(os, v);
  detail::write_le<std::int32_t>(os, field.codim);
  for (double v : field.dist) detail::write_le(os, v);
  for (int k = 0; k < D; ++k)
    for (const auto& p : field.cp) detail::write_le(os, p[k]);
  if (!os) throw std::runtime_error("write_field: I/O failure");
}

/// Reads the leading dimension word without consuming it.
inline int peek_field_dim(std::istream& is) {
  const auto pos = is.tellg();
  const int dim = detail::read_le<std::int32_t>(is);
  is.seekg(pos);
  return dim;
}

template <int D>
CpField<D> read_field(std::istream& is) {
  const int dim = detail::read_le<std::int32_t>(is);
  if (dim != D) throw std::runtime_error("read_field: dimension mismatch");
  const int n = detail::read_le<std::int32_t>(is);
  Vec<D> lo, hi;
  for (auto& v : lo) v = detail::read_le<double>(is);
  for (auto& v : hi) v = detail::read_le<double>(is);
  const int codim = detail::read_le<std::int32_t>(is);
  if (codim != 1 && codim != 2) throw std::runtime_error("read_field: bad codimension");
  CpField<D> field{Grid<D>::cube(lo, hi, n), codim, {}, {}};
  const std::size_t count = field.grid.size();
  field.dist.resize(count);
  field.cp.resize(count);
  for (auto& v : field.dist) v = detail::read_le<double>(is);
  for (int k = 0; k < D; ++k)
    for (auto& p : field.cp) p[k] = detail::read_le<double>(is);
  return field;
}

}  // namespace cpquad
