#include "grushin/gridfile.hpp"

#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>
#include <vector>

#include "grushin/errors.hpp"
#include "grushin/report.hpp"

namespace grushin {

namespace {

void put_u32(std::string& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xFFu));
}

void put_f64(std::string& out, double d) {
  const auto v = std::bit_cast<std::uint64_t>(d);
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xFFu));
}

std::uint32_t get_u32(const unsigned char* p) {
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(p[i]) << (8 * i);
  return v;
}

double get_f64(const unsigned char* p) {
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(p[i]) << (8 * i);
  return std::bit_cast<double>(v);
}

std::vector<unsigned char> read_all(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "'");
  std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (in.bad()) throw IoError("cannot read '" + path + "'");
  return bytes;
}

GridFileHeader parse_header(const std::vector<unsigned char>& bytes, const std::string& path) {
  if (bytes.size() < kGridHeaderBytes) {
    if (bytes.size() >= 8 && std::memcmp(bytes.data(), kGridMagic, 8) != 0) throw FormatError("'" + path + "' is not a GRUSHIN1 grid file");
    throw TruncationError("'" + path + "' is shorter than the grid header");
  }
  if (std::memcmp(bytes.data(), kGridMagic, 8) != 0) throw FormatError("'" + path + "' is not a GRUSHIN1 grid file");
  GridFileHeader h;
  h.n = get_u32(bytes.data() + 8);
  h.Nx = get_u32(bytes.data() + 12);
  h.Nt = get_u32(bytes.data() + 16);
  h.x_extent = get_f64(bytes.data() + 20);
  h.t_extent = get_f64(bytes.data() + 28);
  h.spec();  // validates
  return h;
}

}  // namespace

GridSpec GridFileHeader::spec() const {
  if (n < 1 || n > static_cast<std::uint32_t>(kMaxDim) || Nx > (1u << 20) || Nt > (1u << 20))
    throw FormatError("grid header dimensions out of range");
  GridSpec s{static_cast<int>(n), static_cast<int>(Nx), x_extent, static_cast<int>(Nt), t_extent};
  try {
    s.validate();
  } catch (const DomainError& e) {
    throw FormatError(std::string("invalid grid header: ") + e.what());
  }
  return s;
}

void save_grid_function(const GridFunction& f, const std::string& path) {
  const GridSpec& s = f.spec();
  std::string out(kGridMagic, kGridMagic + 8);
  out.reserve(kGridHeaderBytes + 16 * f.values().size());
  put_u32(out, static_cast<std::uint32_t>(s.n));
  put_u32(out, static_cast<std::uint32_t>(s.Nx));
  put_u32(out, static_cast<std::uint32_t>(s.Nt));
  put_f64(out, s.x_extent);
  put_f64(out, s.t_extent);
  for (const cplx& z : f.values()) {
    put_f64(out, z.real());
    put_f64(out, z.imag());
  }
  write_file_atomic(path, out);
}

GridFileHeader read_grid_header(const std::string& path) { return parse_header(read_all(path), path); }

GridFunction load_grid_function(const std::string& path) {
  const auto bytes = read_all(path);
  const GridSpec spec = parse_header(bytes, path).spec();
  const std::size_t expected = kGridHeaderBytes + 16 * spec.size();
  if (bytes.size() != expected)
    throw TruncationError("'" + path + "' holds " + std::to_string(bytes.size()) + " bytes, header declares " + std::to_string(expected));
  std::vector<cplx> v(spec.size());
  const unsigned char* p = bytes.data() + kGridHeaderBytes;
  for (std::size_t i = 0; i < v.size(); ++i, p += 16) {
    const double re = get_f64(p), im = get_f64(p + 8);
    if (!std::isfinite(re) || !std::isfinite(im)) throw DataError("non-finite sample " + std::to_string(i) + " in '" + path + "'");
    v[i] = {re, im};
  }
  return GridFunction(spec, std::move(v));
}

}  // namespace grushin
