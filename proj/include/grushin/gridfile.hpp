#pragma once

#include <cstdint>
#include <string>

#include "grushin/transform.hpp"

namespace grushin {

// Binary layout, all little-endian:
//   "GRUSHIN1" | u32 n | u32 Nx | u32 Nt | f64 x_extent | f64 t_extent | payload
// payload: Nx^n Nt complex samples as (re, im) f64 pairs, spatial index fastest.
inline constexpr char kGridMagic[8] = {'G', 'R', 'U', 'S', 'H', 'I', 'N', '1'};
inline constexpr std::size_t kGridHeaderBytes = 36;

struct GridFileHeader {
  std::uint32_t n = 0;
  std::uint32_t Nx = 0;
  std::uint32_t Nt = 0;
  double x_extent = 0.0;
  double t_extent = 0.0;

  GridSpec spec() const;
};

// Throws IoError when the file cannot be written (atomic temp-then-rename).
void save_grid_function(const GridFunction& f, const std::string& path);

// FormatError for a bad magic or invalid header, TruncationError when the
// payload size differs from the header, DataError for non-finite samples,
// IoError when the file cannot be read.
GridFunction load_grid_function(const std::string& path);
GridFileHeader read_grid_header(const std::string& path);

}  // namespace grushin
