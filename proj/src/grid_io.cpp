#include "qev/grid.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>

namespace qev {

namespace {

static_assert(std::endian::native == std::endian::little,
              "grid container I/O assumes a little-endian host");

constexpr char grid_magic[8] = {'Q', 'E', 'V', 'G', 'R', 'I', 'D', '1'};

template <typename T>
void write_pod(std::ostream& out, const T& value) {
  out.write(reinterpret_cast<const char*>(&value), sizeof(T));
}

template <typename T>
T read_pod(std::istream& in) {
  T value;
  in.read(reinterpret_cast<char*>(&value), sizeof(T));
  if (!in) throw Error("grid container: truncated file");
  return value;
}

struct GridHeader {
  GridGeometry geometry;
  std::uint32_t components = 0;
  std::uint32_t dtype = 0;
};

void write_header(std::ostream& out, const GridGeometry& geom,
                  std::uint32_t components, std::uint32_t dtype) {
  out.write(grid_magic, sizeof(grid_magic));
  write_pod<std::uint32_t>(out, static_cast<std::uint32_t>(geom.dim()));
  for (Index s : geom.shape) write_pod<std::uint64_t>(out, s);
  for (Index a = 0; a < geom.dim(); ++a) write_pod<double>(out, geom.spacing(a));
  for (Index a = 0; a < geom.dim(); ++a) write_pod<double>(out, geom.origin(a));
  write_pod<std::uint32_t>(out, components);
  write_pod<std::uint32_t>(out, dtype);
}

GridHeader read_header(std::istream& in) {
  char magic[8];
  in.read(magic, 8);
  if (!in || std::memcmp(magic, grid_magic, 8) != 0)
    throw Error("grid container: bad magic");
  GridHeader h;
  const auto ndim = read_pod<std::uint32_t>(in);
  if (ndim < 2 || ndim > 4) throw Error("grid container: bad dimension count");
  h.geometry.shape.resize(ndim);
  for (auto& s : h.geometry.shape)
    s = static_cast<Index>(read_pod<std::uint64_t>(in));
  h.geometry.spacing.resize(ndim);
  h.geometry.origin.resize(ndim);
  for (std::uint32_t a = 0; a < ndim; ++a)
    h.geometry.spacing(a) = read_pod<double>(in);
  for (std::uint32_t a = 0; a < ndim; ++a)
    h.geometry.origin(a) = read_pod<double>(in);
  h.components = read_pod<std::uint32_t>(in);
  h.dtype = read_pod<std::uint32_t>(in);
  if (h.dtype > 1) throw Error("grid container: unknown scalar type");
  return h;
}

template <typename Scalar>
void write_impl(const std::string& path, const GridFieldT<Scalar>& f,
                std::uint32_t dtype) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open for writing: " + path);
  write_header(out, f.geometry(), static_cast<std::uint32_t>(f.components()),
               dtype);
  out.write(reinterpret_cast<const char*>(f.raw().data()),
            static_cast<std::streamsize>(f.raw().size() * sizeof(Scalar)));
  if (!out) throw Error("short write: " + path);
}

template <typename Scalar>
GridFieldT<Scalar> read_impl(const std::string& path,
                             std::uint32_t expected_dtype) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open: " + path);
  const GridHeader h = read_header(in);
  if (h.dtype != expected_dtype)
    throw Error("grid container: scalar type mismatch in " + path);
  GridFieldT<Scalar> f(h.geometry, h.components);
  in.read(reinterpret_cast<char*>(f.raw().data()),
          static_cast<std::streamsize>(f.raw().size() * sizeof(Scalar)));
  if (!in) throw Error("grid container: truncated values in " + path);
  return f;
}

template <typename Scalar>
void export_csv_impl(const std::string& path, const GridFieldT<Scalar>& f) {
  std::ofstream out(path);
  if (!out) throw Error("cannot open for writing: " + path);

  const char* coord_names[] = {"t", "x", "y", "z"};
  const Index n = f.geometry().dim();
  for (Index a = 0; a < n; ++a) out << coord_names[a] << ",";
  for (Index c = 0; c < f.components(); ++c) {
    if constexpr (std::is_same_v<Scalar, Complex>)
      out << "c" << c << "_re,c" << c << "_im";
    else
      out << "c" << c;
    out << (c + 1 < f.components() ? "," : "\n");
  }

  const Index total = f.geometry().num_points();
  std::vector<Index> idx;
  for (Index flat = 0; flat < total; ++flat) {
    f.geometry().unflatten(flat, idx);
    const Vec x = f.geometry().point(idx);
    for (Index a = 0; a < n; ++a) out << format_full(x(a)) << ",";
    for (Index c = 0; c < f.components(); ++c) {
      if constexpr (std::is_same_v<Scalar, Complex>) {
        out << format_full(f.at(flat, c).real()) << ","
            << format_full(f.at(flat, c).imag());
      } else {
        out << format_full(f.at(flat, c));
      }
      out << (c + 1 < f.components() ? "," : "\n");
    }
  }
}

}  // namespace

void write_grid(const std::string& path, const GridField& f) {
  write_impl(path, f, 0);
}

void write_grid(const std::string& path, const ComplexGridField& f) {
  write_impl(path, f, 1);
}

GridField read_grid(const std::string& path) { return read_impl<Real>(path, 0); }

ComplexGridField read_complex_grid(const std::string& path) {
  return read_impl<Complex>(path, 1);
}

bool stored_grid_is_complex(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open: " + path);
  return read_header(in).dtype == 1;
}

void export_grid_csv(const std::string& path, const GridField& f) {
  export_csv_impl(path, f);
}

void export_grid_csv(const std::string& path, const ComplexGridField& f) {
  export_csv_impl(path, f);
}

}  // namespace qev
