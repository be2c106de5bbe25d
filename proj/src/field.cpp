#include "sigmalab/field.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <stdexcept>
#include <string>

namespace sigmalab {

namespace {

void check_size(const GridPtr& g, Eigen::Index n) {
  if (!g) throw std::invalid_argument("field has no grid");
  if (n != g->size()) {
    throw std::invalid_argument("field size " + std::to_string(n) + " does not match grid size " +
                                std::to_string(g->size()));
  }
}

template <typename T>
void put_le(std::ostream& out, T value) {
  static_assert(sizeof(T) == 8);
  std::uint64_t bits;
  std::memcpy(&bits, &value, 8);
  if constexpr (std::endian::native == std::endian::big) bits = __builtin_bswap64(bits);
  char buf[8];
  std::memcpy(buf, &bits, 8);
  out.write(buf, 8);
}

template <typename T>
T get_le(std::istream& in) {
  char buf[8];
  if (!in.read(buf, 8)) throw std::runtime_error("truncated field file");
  std::uint64_t bits;
  std::memcpy(&bits, buf, 8);
  if constexpr (std::endian::native == std::endian::big) bits = __builtin_bswap64(bits);
  T value;
  std::memcpy(&value, &bits, 8);
  return value;
}

}  // namespace

RealField::RealField(GridPtr g, Eigen::ArrayXd v) : grid(std::move(g)), values(std::move(v)) {
  check_size(grid, values.size());
}

RealField::RealField(GridPtr g) : grid(std::move(g)) {
  check_size(grid, grid ? grid->size() : 0);
  values = Eigen::ArrayXd::Zero(grid->size());
}

SpectralField::SpectralField(GridPtr g, Eigen::ArrayXcd c) : grid(std::move(g)), coeffs(std::move(c)) {
  check_size(grid, coeffs.size());
}

SpectralField::SpectralField(GridPtr g) : grid(std::move(g)) {
  check_size(grid, grid ? grid->size() : 0);
  coeffs = Eigen::ArrayXcd::Zero(grid->size());
}

void require_same_grid(const Grid& a, const Grid& b) {
  if (!(a.spec() == b.spec())) throw std::invalid_argument("fields live on different grids");
}

void write_field(std::ostream& out, const RealField& f) {
  check_size(f.grid, f.values.size());
  put_le<std::int64_t>(out, f.grid->dim());
  put_le<std::int64_t>(out, f.grid->points());
  put_le<double>(out, f.grid->length());
  for (Eigen::Index i = 0; i < f.values.size(); ++i) put_le<double>(out, f.values[i]);
  if (!out) throw std::runtime_error("failed writing field");
}

void write_field(const std::filesystem::path& path, const RealField& f) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  write_field(out, f);
}

RealField read_field(std::istream& in) {
  GridSpec spec;
  spec.dim = static_cast<int>(get_le<std::int64_t>(in));
  spec.points = static_cast<int>(get_le<std::int64_t>(in));
  spec.length = get_le<double>(in);
  auto grid = build_grid(spec);
  Eigen::ArrayXd values(grid->size());
  for (Eigen::Index i = 0; i < values.size(); ++i) values[i] = get_le<double>(in);
  return RealField(grid, std::move(values));
}

RealField read_field(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  return read_field(in);
}

}  // namespace sigmalab
