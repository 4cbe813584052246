#ifndef QEV_COMMON_HPP
#define QEV_COMMON_HPP

#include <Eigen/Dense>

#include <charconv>
#include <complex>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace qev {

using Real = double;
using Complex = std::complex<double>;
using Index = Eigen::Index;

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;
using CVec = Eigen::VectorXcd;
using CMat = Eigen::MatrixXcd;

inline constexpr Real pi = 3.14159265358979323846;

class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

class DimensionMismatch : public Error {
public:
  using Error::Error;
};

class UnitMismatch : public Error {
public:
  using Error::Error;
};

class PhysicallyDisallowed : public Error {
public:
  using Error::Error;
};

class QuadratureError : public Error {
public:
  using Error::Error;
};

class StabilityError : public Error {
public:
  using Error::Error;
};

class ConfigError : public Error {
public:
  using Error::Error;
};

// Pairwise reduction with a fixed association order. The result depends only
// on the element order, never on thread count or chunking, which keeps
// amplitude sums bit-stable.
template <typename T>
T pairwise_sum(std::span<const T> values) {
  const std::size_t n = values.size();
  if (n == 0) return T{};
  if (n <= 8) {
    T acc = values[0];
    for (std::size_t i = 1; i < n; ++i) acc += values[i];
    return acc;
  }
  const std::size_t half = n / 2;
  return pairwise_sum(values.first(half)) + pairwise_sum(values.subspan(half));
}

template <typename T>
T pairwise_sum(const std::vector<T>& values) {
  return pairwise_sum(std::span<const T>(values));
}

// Shortest decimal representation that round-trips to the same double.
inline std::string format_full(Real value) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, res.ptr);
}

inline std::string format_full(Complex value) {
  return format_full(value.real()) + (value.imag() < 0 ? "-" : "+") +
         format_full(std::abs(value.imag())) + "i";
}

}  // namespace qev

#endif
