#pragma once

// Uniform grids on [0,1]^d (d = 1, 2), cube averages, maximal functions and
// the Lebesgue differentiation check.
//
// Grid fields are flat arrays of cells^d entries; in 2-D the cell (i, j)
// (i along the first axis) sits at index i * cells + j. Cell centers are
// ((i + 1/2) / cells, ...). A cube is the open axis-aligned box
// |x - center|_inf < halfwidth intersected with the domain, and it is
// identified with the cells whose centers it contains.

#include <algorithm>
#include <array>
#include <cmath>
#include <deque>
#include <functional>
#include <limits>
#include <vector>

#include "qlab/errors.hpp"
#include "qlab/galb_tensor.hpp"
#include "qlab/gauge.hpp"
#include "qlab/measure.hpp"
#include "qlab/quasi_normed_space.hpp"

namespace qlab {

class GridSpace {
 public:
  GridSpace(int d, std::size_t cells) : d_(d), cells_(cells) {
    detail::require(d == 1 || d == 2, "grid dimension must be 1 or 2");
    detail::require(cells >= 2, "grid needs at least 2 cells per axis");
  }

  int dim() const { return d_; }
  std::size_t cells() const { return cells_; }
  std::size_t size() const { return d_ == 1 ? cells_ : cells_ * cells_; }
  double cell_mass() const { return 1.0 / static_cast<double>(size()); }
  MeasureSpace measure() const { return MeasureSpace(std::vector<double>(size(), cell_mass())); }

  double center(std::size_t axis_index) const {
    return (static_cast<double>(axis_index) + 0.5) / static_cast<double>(cells_);
  }

  std::array<std::size_t, 2> coords(std::size_t flat) const {
    return d_ == 1 ? std::array<std::size_t, 2>{flat, 0} : std::array<std::size_t, 2>{flat / cells_, flat % cells_};
  }
  std::size_t flat(std::size_t i, std::size_t j = 0) const { return d_ == 1 ? i : i * cells_ + j; }

  /// Halfwidths L / (2 cells), L = 1..cells: every cube side in whole cells.
  std::vector<double> all_scales() const {
    std::vector<double> s;
    for (std::size_t L = 1; L <= cells_; ++L) s.push_back(static_cast<double>(L) / (2.0 * static_cast<double>(cells_)));
    return s;
  }

  /// Index range [lo, hi] along one axis of cells whose centers satisfy
  /// |center - c| < h. Empty when lo > hi.
  std::pair<long, long> axis_range(double c, double h) const {
    const double n = static_cast<double>(cells_);
    // edges landing on a center up to rounding are snapped so that the
    // open cube drops that center on both sides alike
    auto snap = [](double x) {
      const double r = std::round(x);
      return std::abs(x - r) < 1e-9 ? r : x;
    };
    const double a = snap(n * (c - h) - 0.5);
    const double b = snap(n * (c + h) - 0.5);
    long lo = static_cast<long>(std::floor(a)) + 1;
    long hi = static_cast<long>(std::ceil(b)) - 1;
    lo = std::max(lo, 0L);
    hi = std::min(hi, static_cast<long>(cells_) - 1);
    return {lo, hi};
  }

 private:
  int d_;
  std::size_t cells_;
};

struct CubeSpec {
  std::vector<double> center;
  double halfwidth = 0.0;
};

/// Which cubes enter the maximal function at y.
enum class CubeBasis {
  /// Cubes centered at y's cell or one of its neighbours that contain y.
  centered,
  /// All cell-aligned cubes (of the given sides) that contain y.
  containing,
};

namespace detail {

inline std::vector<std::size_t> cube_cells(const GridSpace& grid, const CubeSpec& q) {
  require_dims(q.center.size() == static_cast<std::size_t>(grid.dim()), "cube center dimension must match the grid");
  require(q.halfwidth > 0.0, "cube halfwidth must be > 0");
  std::vector<std::size_t> out;
  const auto [lo0, hi0] = grid.axis_range(q.center[0], q.halfwidth);
  if (grid.dim() == 1) {
    for (long i = lo0; i <= hi0; ++i) out.push_back(static_cast<std::size_t>(i));
  } else {
    const auto [lo1, hi1] = grid.axis_range(q.center[1], q.halfwidth);
    for (long i = lo0; i <= hi0; ++i)
      for (long j = lo1; j <= hi1; ++j) out.push_back(grid.flat(static_cast<std::size_t>(i), static_cast<std::size_t>(j)));
  }
  if (out.empty()) throw DegenerateCubeError("cube contains no grid cell centers");
  return out;
}

}  // namespace detail

/// Mass-weighted mean of F over the cells of Q. All cells carry the same
/// mass, so this is the plain mean, computed as a shifted sum so that a
/// constant region averages to its value exactly.
inline std::vector<double> cube_average(const GridSpace& grid, const VectorField& F, const CubeSpec& q) {
  detail::require_dims(F.size() == grid.size(), "field must live on the grid");
  const auto cells = detail::cube_cells(grid, q);
  const auto ref = F.at(cells.front());
  std::vector<double> out(F.dim(), 0.0);
  for (auto c : cells)
    for (std::size_t k = 0; k < F.dim(); ++k) out[k] += F.at(c)[k] - ref[k];
  for (std::size_t k = 0; k < F.dim(); ++k) out[k] = ref[k] + out[k] / static_cast<double>(cells.size());
  return out;
}

inline double cube_average(const GridSpace& grid, const ScalarField& f, const CubeSpec& q) {
  detail::require_dims(f.size() == grid.size(), "field must live on the grid");
  const auto cells = detail::cube_cells(grid, q);
  const double ref = f[cells.front()];
  double s = 0.0;
  for (auto c : cells) s += f[c] - ref;
  return ref + s / static_cast<double>(cells.size());
}

namespace detail {

/// Prefix sums (1-D) or summed-area table (2-D) of each component.
class BoxSums {
 public:
  BoxSums(const GridSpace& grid, const VectorField& F) : grid_(grid), dim_(F.dim()), n_(grid.cells()) {
    const std::size_t side = n_ + 1;
    const std::size_t planes = grid.dim() == 1 ? side : side * side;
    table_.assign(planes * dim_, 0.0);
    if (grid.dim() == 1) {
      for (std::size_t i = 0; i < n_; ++i)
        for (std::size_t k = 0; k < dim_; ++k) at(i + 1, 0, k) = at(i, 0, k) + F.at(i)[k];
    } else {
      for (std::size_t i = 0; i < n_; ++i)
        for (std::size_t j = 0; j < n_; ++j)
          for (std::size_t k = 0; k < dim_; ++k)
            at(i + 1, j + 1, k) = F.at(grid.flat(i, j))[k] + at(i, j + 1, k) + at(i + 1, j, k) - at(i, j, k);
    }
  }

  /// Component sums over cells [i0, i1) x [j0, j1) (j ignored in 1-D).
  void sum(std::size_t i0, std::size_t i1, std::size_t j0, std::size_t j1, std::vector<double>& out) const {
    for (std::size_t k = 0; k < dim_; ++k) {
      if (grid_.dim() == 1) {
        out[k] = at(i1, 0, k) - at(i0, 0, k);
      } else {
        out[k] = at(i1, j1, k) - at(i0, j1, k) - at(i1, j0, k) + at(i0, j0, k);
      }
    }
  }

 private:
  double& at(std::size_t i, std::size_t j, std::size_t k) { return table_[index(i, j, k)]; }
  double at(std::size_t i, std::size_t j, std::size_t k) const { return table_[index(i, j, k)]; }
  std::size_t index(std::size_t i, std::size_t j, std::size_t k) const {
    return grid_.dim() == 1 ? i * dim_ + k : (i * (n_ + 1) + j) * dim_ + k;
  }

  const GridSpace& grid_;
  std::size_t dim_;
  std::size_t n_;
  std::vector<double> table_;
};

/// Sliding maximum: out[y] = max_{a in [y - L + 1, y]} v[a + L - 1] for
/// y in [0, n), where v is indexed by window start a + L - 1 in [0, n + L - 1).
inline std::vector<double> sliding_max(const std::vector<double>& v, std::size_t n, std::size_t L) {
  std::vector<double> out(n, 0.0);
  std::deque<std::size_t> dq;
  // window start s = a + L - 1 ranges over [y, y + L - 1] for cell y
  std::size_t next = 0;
  for (std::size_t y = 0; y < n; ++y) {
    const std::size_t hi = y + L - 1;
    while (next <= hi) {
      while (!dq.empty() && v[dq.back()] <= v[next]) dq.pop_back();
      dq.push_back(next);
      ++next;
    }
    while (dq.front() < y) dq.pop_front();
    out[y] = v[dq.front()];
  }
  return out;
}

/// Pointwise sup over the cube family of value(average over the cube).
inline ScalarField maximal(const GridSpace& grid, const VectorField& F, const std::vector<double>& scales,
                           CubeBasis basis, const std::function<double(const std::vector<double>&)>& value) {
  detail::require_dims(F.size() == grid.size(), "field must live on the grid");
  detail::require(!scales.empty(), "maximal function needs at least one scale");
  const BoxSums sums(grid, F);
  const std::size_t n = grid.cells();
  const long ln = static_cast<long>(n);
  ScalarField out(std::vector<double>(grid.size(), 0.0));
  std::vector<double> acc(F.dim());
  std::vector<double> avg(F.dim());

  if (basis == CubeBasis::centered) {
    for (std::size_t y = 0; y < grid.size(); ++y) {
      const auto cy = grid.coords(y);
      double best = 0.0;
      const long r1 = grid.dim() == 2 ? 1 : 0;
      for (long o0 = -1; o0 <= 1; ++o0) {
        for (long o1 = -r1; o1 <= r1; ++o1) {
          const long c0 = static_cast<long>(cy[0]) + o0;
          const long c1 = static_cast<long>(cy[1]) + o1;
          if (c0 < 0 || c0 >= ln || c1 < 0 || (grid.dim() == 2 && c1 >= ln)) continue;
          const double need = static_cast<double>(std::max(std::abs(o0), std::abs(o1))) / static_cast<double>(n);
          for (double h : scales) {
            if (!(h > need)) continue;
            const auto [lo0, hi0] = grid.axis_range(grid.center(static_cast<std::size_t>(c0)), h);
            std::pair<long, long> r{0, 0};
            if (grid.dim() == 2) r = grid.axis_range(grid.center(static_cast<std::size_t>(c1)), h);
            const double count = static_cast<double>(hi0 - lo0 + 1) * static_cast<double>(r.second - r.first + 1);
            sums.sum(static_cast<std::size_t>(lo0), static_cast<std::size_t>(hi0 + 1),
                     static_cast<std::size_t>(r.first), static_cast<std::size_t>(r.second + 1), acc);
            for (std::size_t k = 0; k < acc.size(); ++k) avg[k] = acc[k] / count;
            best = std::max(best, value(avg));
          }
        }
      }
      out[y] = best;
    }
    return out;
  }

  // containing: windows of side L (in cells) with start a in [-(L-1), n-1],
  // truncated to the domain.
  std::vector<std::size_t> sides;
  for (double h : scales) {
    const auto L = static_cast<std::size_t>(std::max(1.0, std::round(2.0 * h * static_cast<double>(n))));
    sides.push_back(std::min(L, n));
  }
  std::sort(sides.begin(), sides.end());
  sides.erase(std::unique(sides.begin(), sides.end()), sides.end());
  for (std::size_t L : sides) {
    const std::size_t starts = n + L - 1;
    auto clip = [&](std::size_t s) {  // window start index s -> [lo, hi)
      const long a = static_cast<long>(s) - static_cast<long>(L) + 1;
      const long lo = std::max(a, 0L);
      const long hi = std::min(a + static_cast<long>(L), ln);
      return std::pair<std::size_t, std::size_t>{static_cast<std::size_t>(lo), static_cast<std::size_t>(hi)};
    };
    if (grid.dim() == 1) {
      std::vector<double> v(starts);
      for (std::size_t s = 0; s < starts; ++s) {
        const auto [lo, hi] = clip(s);
        sums.sum(lo, hi, 0, 0, acc);
        for (std::size_t k = 0; k < acc.size(); ++k) avg[k] = acc[k] / static_cast<double>(hi - lo);
        v[s] = value(avg);
      }
      const auto m = sliding_max(v, n, L);
      for (std::size_t y = 0; y < n; ++y) out[y] = std::max(out[y], m[y]);
    } else {
      std::vector<std::vector<double>> v(starts, std::vector<double>(starts));
      for (std::size_t s0 = 0; s0 < starts; ++s0) {
        const auto [lo0, hi0] = clip(s0);
        for (std::size_t s1 = 0; s1 < starts; ++s1) {
          const auto [lo1, hi1] = clip(s1);
          sums.sum(lo0, hi0, lo1, hi1, acc);
          const double count = static_cast<double>((hi0 - lo0) * (hi1 - lo1));
          for (std::size_t k = 0; k < acc.size(); ++k) avg[k] = acc[k] / count;
          v[s0][s1] = value(avg);
        }
      }
      // separable max: along the second axis, then the first
      std::vector<std::vector<double>> rowmax(starts);
      for (std::size_t s0 = 0; s0 < starts; ++s0) rowmax[s0] = sliding_max(v[s0], n, L);
      for (std::size_t j = 0; j < n; ++j) {
        std::vector<double> column(starts);
        for (std::size_t s0 = 0; s0 < starts; ++s0) column[s0] = rowmax[s0][j];
        const auto m = sliding_max(column, n, L);
        for (std::size_t i = 0; i < n; ++i) {
          auto& o = out[grid.flat(i, j)];
          o = std::max(o, m[i]);
        }
      }
    }
  }
  return out;
}

}  // namespace detail

/// Hardy-Littlewood maximal function of |f| over the given halfwidths.
inline ScalarField hl_maximal(const GridSpace& grid, const ScalarField& f, const std::vector<double>& scales,
                              CubeBasis basis = CubeBasis::centered) {
  detail::require_dims(f.size() == grid.size(), "field must live on the grid");
  VectorField F(f.size(), 1);
  for (std::size_t i = 0; i < f.size(); ++i) F.at(i)[0] = std::abs(f[i]);
  return detail::maximal(grid, F, scales, basis, [](const std::vector<double>& a) { return a[0]; });
}

/// sup over cubes containing y of || average of F over the cube ||_X.
inline ScalarField vector_maximal(const GridSpace& grid, const QuasiNormedSpace& X, const VectorField& F,
                                  const std::vector<double>& scales, CubeBasis basis = CubeBasis::centered) {
  detail::require_dims(F.dim() == X.dim(), "vector field dimension does not match the target space");
  return detail::maximal(grid, F, scales, basis, [&](const std::vector<double>& a) { return X.norm(a); });
}

/// ||Mf||_{1,inf} / ||f||_1 on the grid measure. Defaults to the cube basis
/// of all cubes containing the point.
inline double weak11_constant(const GridSpace& grid, const ScalarField& f, const std::vector<double>& scales,
                              CubeBasis basis = CubeBasis::containing) {
  detail::require_dims(f.size() == grid.size(), "field must live on the grid");
  const auto space = grid.measure();
  ScalarField abs_f(std::vector<double>(f.size()));
  for (std::size_t i = 0; i < f.size(); ++i) abs_f[i] = std::abs(f[i]);
  const double l1 = Gauge::lp_value(space, abs_f.values, 1.0);
  detail::require(l1 > 0.0, "weak (1,1) constant needs a nonzero input");
  return Gauge::weak_l1_value(space, hl_maximal(grid, f, scales, basis).values) / l1;
}

/// Vector version: ||M[X,lambda] J(rep)||_{1,inf} divided by the L_1^lambda
/// certificate lambda((||x_j|| ||f_j||_1)_j) of the representation.
inline double weak11_constant(const GridSpace& grid, const TensorRep& rep, const std::vector<double>& scales,
                              CubeBasis basis = CubeBasis::containing) {
  const auto space = grid.measure();
  const double cert = representation_cost(rep, space);
  detail::require(cert > 0.0, "weak (1,1) constant needs a nonzero input");
  const auto M = vector_maximal(grid, rep.target, j_map(rep, space), scales, basis);
  return Gauge::weak_l1_value(space, M.values) / cert;
}

struct DifferentiationRow {
  double halfwidth = 0.0;
  double max_error = 0.0;
};

/// For each halfwidth h: max over sample cells y of
/// || average of F over Q(center(y), h) - F(y) ||_X.
inline std::vector<DifferentiationRow> differentiation_report(const GridSpace& grid, const QuasiNormedSpace& X,
                                                              const VectorField& F,
                                                              const std::vector<std::size_t>& samples,
                                                              const std::vector<double>& schedule) {
  detail::require_dims(F.size() == grid.size(), "field must live on the grid");
  std::vector<DifferentiationRow> rows;
  std::vector<double> diff(F.dim());
  for (double h : schedule) {
    DifferentiationRow row{h, 0.0};
    for (auto y : samples) {
      const auto c = grid.coords(y);
      CubeSpec q{{grid.center(c[0])}, h};
      if (grid.dim() == 2) q.center.push_back(grid.center(c[1]));
      const auto avg = cube_average(grid, F, q);
      for (std::size_t k = 0; k < diff.size(); ++k) diff[k] = avg[k] - F.at(y)[k];
      row.max_error = std::max(row.max_error, X.norm(diff));
    }
    rows.push_back(row);
  }
  return rows;
}

}  // namespace qlab
