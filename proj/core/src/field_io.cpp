#include "reveuler/field_io.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>

#include "reveuler/error.hpp"

namespace reveuler {

namespace {

static_assert(std::endian::native == std::endian::little, "FLD1 I/O assumes a little-endian host");

template <class T>
void put(std::ofstream& out, T v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <class T>
T get(std::ifstream& in, const std::filesystem::path& path) {
  T v{};
  if (!in.read(reinterpret_cast<char*>(&v), sizeof(T))) {
    throw Error(ErrorKind::Io, "truncated FLD1 header in " + path.string());
  }
  return v;
}

}  // namespace

void write_fld1(const std::filesystem::path& path, const std::vector<const ScalarField*>& components) {
  if (components.empty() || components.size() > 255) throw Error(ErrorKind::Io, "FLD1 needs 1..255 components");
  const GridSpec& g = components.front()->grid();
  for (const auto* c : components) {
    if (!(c->grid() == g)) throw Error(ErrorKind::Io, "FLD1 components must share one grid");
  }
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorKind::Io, "cannot open " + path.string() + " for writing");
  out.write("FLD1", 4);
  put<std::uint32_t>(out, static_cast<std::uint32_t>(g.n));
  put<double>(out, g.half_width);
  put<std::uint8_t>(out, static_cast<std::uint8_t>(components.size()));
  put<std::uint8_t>(out, kAxisTagX1Slowest);
  for (const auto* c : components) {
    const auto v = c->values();
    out.write(reinterpret_cast<const char*>(v.data()), static_cast<std::streamsize>(v.size_bytes()));
  }
  if (!out) throw Error(ErrorKind::Io, "write failed for " + path.string());
}

void write_fld1(const std::filesystem::path& path, const ScalarField& field) { write_fld1(path, {&field}); }

void write_fld1(const std::filesystem::path& path, const VectorField& field) {
  write_fld1(path, {&field.c[0], &field.c[1], &field.c[2]});
}

std::vector<ScalarField> read_fld1(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::Io, "cannot open " + path.string());
  char magic[4];
  if (!in.read(magic, 4) || std::memcmp(magic, "FLD1", 4) != 0) {
    throw Error(ErrorKind::Io, path.string() + " is not an FLD1 file");
  }
  GridSpec g;
  g.n = static_cast<int>(get<std::uint32_t>(in, path));
  g.half_width = get<double>(in, path);
  const auto ncomp = get<std::uint8_t>(in, path);
  const auto tag = get<std::uint8_t>(in, path);
  if (tag != kAxisTagX1Slowest) throw Error(ErrorKind::Io, "unsupported FLD1 axis tag");
  if (g.n <= 0 || g.n > 4096 || !(g.half_width > 0.0)) throw Error(ErrorKind::Io, "corrupt FLD1 grid header");
  std::vector<ScalarField> out;
  for (unsigned c = 0; c < ncomp; ++c) {
    std::vector<double> values(g.size());
    const auto bytes = static_cast<std::streamsize>(values.size() * sizeof(double));
    if (!in.read(reinterpret_cast<char*>(values.data()), bytes)) {
      throw Error(ErrorKind::Io, "truncated FLD1 payload in " + path.string());
    }
    out.emplace_back(g, std::move(values));
  }
  return out;
}

VectorField read_fld1_vector(const std::filesystem::path& path) {
  auto c = read_fld1(path);
  if (c.size() != 3) throw Error(ErrorKind::Io, path.string() + " does not hold a 3-component field");
  return VectorField(std::move(c[0]), std::move(c[1]), std::move(c[2]));
}

}  // namespace reveuler
