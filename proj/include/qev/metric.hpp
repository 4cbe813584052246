#ifndef QEV_METRIC_HPP
#define QEV_METRIC_HPP

#include "qev/common.hpp"

namespace qev {

// Minkowski metric with signature (+, -, ..., -) on a (1+d)-dimensional
// spacetime, d in {1,2,3}. Index 0 is the temporal axis throughout; the
// spatial axes follow. Four-vectors are plain Eigen vectors of size d+1 and
// are always stored with upper (contravariant) components.
class Metric {
public:
  explicit Metric(int dim_space) : dim_space_(dim_space) {
    if (dim_space < 1 || dim_space > 3)
      throw DimensionMismatch("spatial dimension must be 1, 2 or 3");
  }

  int dim_space() const { return dim_space_; }
  int dim() const { return dim_space_ + 1; }

  // g_{aa}: +1 on the temporal axis, -1 on spatial axes.
  Real sign(Index axis) const { return axis == 0 ? 1.0 : -1.0; }

  Vec diagonal() const {
    Vec g = -Vec::Ones(dim());
    g(0) = 1.0;
    return g;
  }

  void check_dim(Index n, const char* what) const {
    if (n != dim())
      throw DimensionMismatch(std::string(what) + ": expected " +
                              std::to_string(dim()) + " components, got " +
                              std::to_string(n));
  }

  bool operator==(const Metric& other) const {
    return dim_space_ == other.dim_space_;
  }

private:
  int dim_space_;
};

using FourVector = Vec;

// x.y = x^0 y^0 - sum_k x^k y^k
template <typename DerivedA, typename DerivedB>
Real minkowski_dot(const Eigen::MatrixBase<DerivedA>& x,
                   const Eigen::MatrixBase<DerivedB>& y) {
  if (x.size() != y.size())
    throw DimensionMismatch("minkowski_dot: size mismatch");
  const Index n = x.size();
  return x(0) * y(0) - x.tail(n - 1).dot(y.tail(n - 1));
}

// Minkowski square x.x
template <typename Derived>
Real minkowski_norm2(const Eigen::MatrixBase<Derived>& x) {
  return minkowski_dot(x, x);
}

// Lowers an index: (x_a) = g_{ab} x^b, i.e. flips the spatial signs.
inline Vec lower_index(const Vec& x) {
  Vec y = -x;
  y(0) = x(0);
  return y;
}

}  // namespace qev

#endif
