#ifndef QEV_GRID_HPP
#define QEV_GRID_HPP

#include "qev/metric.hpp"

#include <functional>
#include <string>
#include <vector>

namespace qev {

// Uniform (1+d) lattice with row-major axis order (t, x, y, z).
struct GridGeometry {
  Vec origin;
  Vec spacing;
  std::vector<Index> shape;

  Index dim() const { return static_cast<Index>(shape.size()); }

  Index num_points() const {
    Index n = 1;
    for (Index s : shape) n *= s;
    return n;
  }

  void validate() const {
    if (origin.size() != dim() || spacing.size() != dim())
      throw DimensionMismatch("grid geometry: inconsistent axis counts");
    for (Index a = 0; a < dim(); ++a) {
      if (!(spacing(a) > 0)) throw Error("grid spacing must be positive");
      if (shape[a] < 4)
        throw Error("grid needs at least 4 samples per axis for central "
                    "differences");
    }
  }

  Index flat_index(const std::vector<Index>& idx) const {
    Index flat = 0;
    for (Index a = 0; a < dim(); ++a) flat = flat * shape[a] + idx[a];
    return flat;
  }

  void unflatten(Index flat, std::vector<Index>& idx) const {
    idx.resize(shape.size());
    for (Index a = dim() - 1; a >= 0; --a) {
      idx[a] = flat % shape[a];
      flat /= shape[a];
    }
  }

  Vec point(const std::vector<Index>& idx) const {
    Vec x = origin;
    for (Index a = 0; a < dim(); ++a) x(a) += spacing(a) * idx[a];
    return x;
  }

  bool same_as(const GridGeometry& other, Real tol = 1e-12) const {
    return shape == other.shape &&
           (origin - other.origin).cwiseAbs().maxCoeff() <= tol &&
           (spacing - other.spacing).cwiseAbs().maxCoeff() <= tol;
  }
};

// Sampled field on the lattice; point-major storage, component-fastest.
// A one-cell boundary layer becomes invalid with every derivative taken;
// invalid_margin tracks how deep, and derived values inside the margin are
// set to NaN so that accidental use is loud.
template <typename Scalar>
class GridFieldT {
public:
  GridFieldT() = default;

  GridFieldT(GridGeometry geometry, Index components, Index invalid_margin = 0)
      : geometry_(std::move(geometry)),
        components_(components),
        margin_(invalid_margin) {
    geometry_.validate();
    if (components < 1) throw Error("grid field needs at least one component");
    values_.assign(static_cast<std::size_t>(geometry_.num_points()) *
                       components_,
                   Scalar(0));
  }

  const GridGeometry& geometry() const { return geometry_; }
  Index components() const { return components_; }
  Index invalid_margin() const { return margin_; }
  void set_invalid_margin(Index m) { margin_ = m; }

  Scalar& at(Index flat, Index comp) {
    return values_[static_cast<std::size_t>(flat) * components_ + comp];
  }
  const Scalar& at(Index flat, Index comp) const {
    return values_[static_cast<std::size_t>(flat) * components_ + comp];
  }

  const std::vector<Scalar>& raw() const { return values_; }
  std::vector<Scalar>& raw() { return values_; }

  // iterate over all points with idx at least `margin` away from every edge
  template <typename F>
  void for_each_interior(Index margin, F&& f) const {
    const Index n = geometry_.num_points();
    std::vector<Index> idx;
    for (Index flat = 0; flat < n; ++flat) {
      geometry_.unflatten(flat, idx);
      bool interior = true;
      for (Index a = 0; a < geometry_.dim(); ++a)
        if (idx[a] < margin || idx[a] >= geometry_.shape[a] - margin) {
          interior = false;
          break;
        }
      if (interior) f(flat, idx);
    }
  }

  // plain central difference d/dx^axis of one component at an interior point
  Scalar partial(const std::vector<Index>& idx, Index axis, Index comp) const {
    std::vector<Index> up = idx, down = idx;
    ++up[axis];
    --down[axis];
    return (at(geometry_.flat_index(up), comp) -
            at(geometry_.flat_index(down), comp)) /
           (Scalar(2) * Scalar(geometry_.spacing(axis)));
  }

  // contravariant derivative: d^0 = d_0, d^k = -d_k
  Scalar partial_upper(const std::vector<Index>& idx, Index axis,
                       Index comp) const {
    const Scalar p = partial(idx, axis, comp);
    return axis == 0 ? p : -p;
  }

private:
  GridGeometry geometry_;
  Index components_ = 0;
  Index margin_ = 0;
  std::vector<Scalar> values_;
};

using GridField = GridFieldT<Real>;
using ComplexGridField = GridFieldT<Complex>;

// Antisymmetric field tensor storage: only the pairs (a < b) are kept, in
// lexicographic order; F^{ba} = -F^{ab} by lookup, never by storage.
class FieldTensorGrid {
public:
  explicit FieldTensorGrid(GridField base) : base_(std::move(base)) {}

  static Index pair_count(Index dim) { return dim * (dim - 1) / 2; }
  static Index pair_index(Index dim, Index a, Index b);

  const GridField& base() const { return base_; }
  GridField& base() { return base_; }
  const GridGeometry& geometry() const { return base_.geometry(); }
  Index dim() const { return base_.geometry().dim(); }
  Index invalid_margin() const { return base_.invalid_margin(); }

  // F^{ab} with sign resolution for arbitrary index order
  Real component(Index flat, Index a, Index b) const {
    if (a == b) return 0.0;
    if (a < b) return base_.at(flat, pair_index(dim(), a, b));
    return -base_.at(flat, pair_index(dim(), b, a));
  }

private:
  GridField base_;
};

// F^{ab} = d^a A^b - d^b A^a by central differences; the one-cell boundary
// is invalidated.
FieldTensorGrid field_tensor(const GridField& potential);

// max over interior points and index triples of
// |d^c F^{ab} + d^a F^{bc} + d^b F^{ca}|
Real homogeneous_maxwell_residual(const FieldTensorGrid& f);

struct CurrentResult {
  GridField current;         // J^a = d_b F^{ba}
  Real continuity_residual;  // max |d_a J^a| over the interior
};

CurrentResult current_and_continuity(const FieldTensorGrid& f);

struct ElectromagneticFields {
  GridField electric;  // E^i = F^{i0}
  GridField magnetic;  // B^i = (curl A)^i; empty for d = 1
};

ElectromagneticFields extract_EB(const FieldTensorGrid& f);

// rebuild the tensor from E and B; exact inverse of extract_EB
FieldTensorGrid assemble_field_tensor(const GridField& electric,
                                      const GridField& magnetic);

// A' = A - (contravariant gradient of chi)
GridField gauge_transform(const GridField& potential, const GridField& chi);

// sample a function of the spacetime point into a fresh grid field
GridField sample_scalar(const GridGeometry& geometry,
                        const std::function<Real(const Vec&)>& f);
GridField sample_potential(const GridGeometry& geometry,
                           const std::function<Vec(const Vec&)>& a);

// largest |value| over valid points; scale reference for residual checks
Real field_scale(const GridField& f);
inline Real field_scale(const FieldTensorGrid& f) { return field_scale(f.base()); }

// ---- container I/O ----------------------------------------------------------
// Binary layout (little endian): magic "QEVGRID1", u32 ndim, u64 shape[ndim],
// f64 spacing[ndim], f64 origin[ndim], u32 component count, u32 scalar type
// (0 = f64, 1 = complex f64), then raw values point-major.

void write_grid(const std::string& path, const GridField& f);
void write_grid(const std::string& path, const ComplexGridField& f);
GridField read_grid(const std::string& path);
ComplexGridField read_complex_grid(const std::string& path);
bool stored_grid_is_complex(const std::string& path);

// CSV export for plotting: coordinate columns then component columns
// (re/im pairs for complex grids)
void export_grid_csv(const std::string& path, const GridField& f);
void export_grid_csv(const std::string& path, const ComplexGridField& f);

}  // namespace qev

#endif
