#include "qev/grid.hpp"

#include <cmath>
#include <limits>

namespace qev {

namespace {

constexpr Real nan_marker = std::numeric_limits<Real>::quiet_NaN();

void invalidate_boundary(GridField& f, Index margin) {
  f.set_invalid_margin(margin);
  const Index n = f.geometry().num_points();
  std::vector<Index> idx;
  for (Index flat = 0; flat < n; ++flat) {
    f.geometry().unflatten(flat, idx);
    bool interior = true;
    for (Index a = 0; a < f.geometry().dim(); ++a)
      if (idx[a] < margin || idx[a] >= f.geometry().shape[a] - margin) {
        interior = false;
        break;
      }
    if (!interior)
      for (Index c = 0; c < f.components(); ++c) f.at(flat, c) = nan_marker;
  }
}

}  // namespace

Index FieldTensorGrid::pair_index(Index dim, Index a, Index b) {
  // lexicographic position of (a, b), a < b, among all ordered pairs
  Index k = 0;
  for (Index i = 0; i < dim; ++i)
    for (Index j = i + 1; j < dim; ++j) {
      if (i == a && j == b) return k;
      ++k;
    }
  throw DimensionMismatch("field tensor pair index out of range");
}

FieldTensorGrid field_tensor(const GridField& potential) {
  const GridGeometry& geom = potential.geometry();
  const Index n = geom.dim();
  if (potential.components() != n)
    throw DimensionMismatch("field_tensor expects a (d+1)-component potential");

  GridField out(geom, FieldTensorGrid::pair_count(n));
  const Index margin = potential.invalid_margin() + 1;
  out.for_each_interior(margin, [&](Index flat, const std::vector<Index>& idx) {
    Index k = 0;
    for (Index a = 0; a < n; ++a)
      for (Index b = a + 1; b < n; ++b) {
        out.at(flat, k) = potential.partial_upper(idx, a, b) -
                          potential.partial_upper(idx, b, a);
        ++k;
      }
  });
  invalidate_boundary(out, margin);
  return FieldTensorGrid(std::move(out));
}

Real homogeneous_maxwell_residual(const FieldTensorGrid& f) {
  const Index n = f.dim();
  const Index margin = f.invalid_margin() + 1;
  const GridField& base = f.base();

  // cyclic derivative of a tensor component, with sign-resolved lookup
  const auto partial_upper_of = [&](const std::vector<Index>& idx, Index axis,
                                    Index a, Index b) -> Real {
    if (a == b) return 0.0;
    const Real sign = a < b ? 1.0 : -1.0;
    const Index comp =
        FieldTensorGrid::pair_index(n, std::min(a, b), std::max(a, b));
    return sign * base.partial_upper(idx, axis, comp);
  };

  Real worst = 0;
  base.for_each_interior(margin, [&](Index, const std::vector<Index>& idx) {
    for (Index a = 0; a < n; ++a)
      for (Index b = a + 1; b < n; ++b)
        for (Index c = b + 1; c < n; ++c) {
          const Real cyclic = partial_upper_of(idx, c, a, b) +
                              partial_upper_of(idx, a, b, c) +
                              partial_upper_of(idx, b, c, a);
          worst = std::max(worst, std::abs(cyclic));
        }
  });
  return worst;
}

CurrentResult current_and_continuity(const FieldTensorGrid& f) {
  const Index n = f.dim();
  const GridGeometry& geom = f.geometry();
  const Index margin = f.invalid_margin() + 1;

  GridField current(geom, n);
  const GridField& base = f.base();
  current.for_each_interior(margin, [&](Index flat,
                                        const std::vector<Index>& idx) {
    for (Index a = 0; a < n; ++a) {
      Real sum = 0;
      for (Index b = 0; b < n; ++b) {
        if (b == a) continue;
        // plain-partial contraction on the first slot: J^a = d_b F^{ba}
        const Real sign = b < a ? 1.0 : -1.0;
        const Index comp =
            FieldTensorGrid::pair_index(n, std::min(a, b), std::max(a, b));
        std::vector<Index> up = idx, down = idx;
        ++up[b];
        --down[b];
        sum += sign *
               (base.at(geom.flat_index(up), comp) -
                base.at(geom.flat_index(down), comp)) /
               (2.0 * geom.spacing(b));
      }
      current.at(flat, a) = sum;
    }
  });
  invalidate_boundary(current, margin);

  Real worst = 0;
  current.for_each_interior(margin + 1,
                            [&](Index, const std::vector<Index>& idx) {
                              Real div = 0;
                              for (Index a = 0; a < n; ++a)
                                div += current.partial(idx, a, a);
                              worst = std::max(worst, std::abs(div));
                            });
  return {std::move(current), worst};
}

ElectromagneticFields extract_EB(const FieldTensorGrid& f) {
  const Index n = f.dim();
  const Index d = n - 1;
  const GridGeometry& geom = f.geometry();
  const Index margin = f.invalid_margin();

  GridField electric(geom, d, margin);
  // d = 3 has the full pseudovector, d = 2 a single out-of-plane component
  const Index b_comps = d == 3 ? 3 : (d == 2 ? 1 : 0);
  GridField magnetic = b_comps > 0 ? GridField(geom, b_comps, margin)
                                   : GridField();

  const Index total = geom.num_points();
  for (Index flat = 0; flat < total; ++flat) {
    for (Index i = 0; i < d; ++i)
      electric.at(flat, i) = f.component(flat, i + 1, 0);
    if (d == 3) {
      // B^i matching B = curl A, i.e. F^{jk} = -eps^{jki} B^i
      magnetic.at(flat, 0) = -f.component(flat, 2, 3);
      magnetic.at(flat, 1) = -f.component(flat, 3, 1);
      magnetic.at(flat, 2) = -f.component(flat, 1, 2);
    } else if (d == 2) {
      magnetic.at(flat, 0) = -f.component(flat, 1, 2);
    }
  }
  return {std::move(electric), std::move(magnetic)};
}

FieldTensorGrid assemble_field_tensor(const GridField& electric,
                                      const GridField& magnetic) {
  const GridGeometry& geom = electric.geometry();
  const Index d = electric.components();
  const Index n = d + 1;
  if (geom.dim() != n)
    throw DimensionMismatch("electric field components inconsistent with grid");

  GridField out(geom, FieldTensorGrid::pair_count(n),
                electric.invalid_margin());
  const Index total = geom.num_points();
  for (Index flat = 0; flat < total; ++flat) {
    for (Index i = 0; i < d; ++i) {
      // F^{0i} = -E^i
      out.at(flat, FieldTensorGrid::pair_index(n, 0, i + 1)) =
          -electric.at(flat, i);
    }
    if (d == 3) {
      out.at(flat, FieldTensorGrid::pair_index(n, 1, 2)) =
          -magnetic.at(flat, 2);
      out.at(flat, FieldTensorGrid::pair_index(n, 1, 3)) =
          magnetic.at(flat, 1);
      out.at(flat, FieldTensorGrid::pair_index(n, 2, 3)) =
          -magnetic.at(flat, 0);
    } else if (d == 2) {
      out.at(flat, FieldTensorGrid::pair_index(n, 1, 2)) =
          -magnetic.at(flat, 0);
    }
  }
  return FieldTensorGrid(std::move(out));
}

GridField gauge_transform(const GridField& potential, const GridField& chi) {
  if (!potential.geometry().same_as(chi.geometry()))
    throw DimensionMismatch("gauge_transform: grids do not match");
  if (chi.components() != 1)
    throw DimensionMismatch("gauge function must be scalar");

  const Index n = potential.geometry().dim();
  const Index margin =
      std::max(potential.invalid_margin(), chi.invalid_margin() + 1);
  GridField out(potential.geometry(), n);
  out.for_each_interior(margin, [&](Index flat, const std::vector<Index>& idx) {
    for (Index a = 0; a < n; ++a)
      out.at(flat, a) = potential.at(flat, a) - chi.partial_upper(idx, a, 0);
  });
  invalidate_boundary(out, margin);
  return out;
}

GridField sample_scalar(const GridGeometry& geometry,
                        const std::function<Real(const Vec&)>& f) {
  GridField out(geometry, 1);
  const Index total = geometry.num_points();
  std::vector<Index> idx;
  for (Index flat = 0; flat < total; ++flat) {
    geometry.unflatten(flat, idx);
    out.at(flat, 0) = f(geometry.point(idx));
  }
  return out;
}

GridField sample_potential(const GridGeometry& geometry,
                           const std::function<Vec(const Vec&)>& a) {
  GridField out(geometry, geometry.dim());
  const Index total = geometry.num_points();
  std::vector<Index> idx;
  for (Index flat = 0; flat < total; ++flat) {
    geometry.unflatten(flat, idx);
    const Vec value = a(geometry.point(idx));
    if (value.size() != geometry.dim())
      throw DimensionMismatch("potential sampler returned wrong dimension");
    for (Index c = 0; c < geometry.dim(); ++c) out.at(flat, c) = value(c);
  }
  return out;
}

Real field_scale(const GridField& f) {
  Real scale = 0;
  f.for_each_interior(f.invalid_margin(),
                      [&](Index flat, const std::vector<Index>&) {
                        for (Index c = 0; c < f.components(); ++c)
                          scale = std::max(scale, std::abs(f.at(flat, c)));
                      });
  return scale;
}

}  // namespace qev
