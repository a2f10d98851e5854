#pragma once

#include <complex>
#include <cstddef>
#include <memory>
#include <span>
#include <vector>

namespace grushin {

using cplx = std::complex<double>;

// Largest supported spatial dimension.
inline constexpr int kMaxDim = 3;

// alpha in N^n.
class MultiIndex {
 public:
  MultiIndex() = default;
  explicit MultiIndex(std::vector<int> entries);

  static MultiIndex zero(int n);
  // e_j, with j 1-based.
  static MultiIndex unit(int n, int j);

  int dim() const { return static_cast<int>(entries_.size()); }
  int degree() const { return degree_; }
  int operator[](int axis) const { return entries_[static_cast<std::size_t>(axis)]; }
  std::span<const int> entries() const { return entries_; }

  MultiIndex operator+(const MultiIndex& other) const;

  bool operator==(const MultiIndex& other) const = default;

 private:
  std::vector<int> entries_;
  int degree_ = 0;
};

// Enumeration of the simplex {alpha in N^n : |alpha| <= K} in graded order
// (all degree-0 indices, then degree 1, ...). Layouts are immutable and shared.
class SimplexLayout {
 public:
  SimplexLayout(int n, int K);

  // Cached instance; thread safe.
  static std::shared_ptr<const SimplexLayout> get(int n, int K);

  int dim() const { return n_; }
  int truncation() const { return K_; }
  std::size_t size() const { return indices_.size(); }

  const MultiIndex& at(std::size_t i) const { return indices_[i]; }
  int degree(std::size_t i) const { return indices_[i].degree(); }

  // Position of alpha, or -1 if |alpha| > K.
  std::ptrdiff_t index_of(std::span<const int> alpha) const;
  std::ptrdiff_t index_of(const MultiIndex& alpha) const { return index_of(alpha.entries()); }

  // Half-open range of positions holding degree d.
  std::size_t degree_begin(int d) const { return degree_offsets_[static_cast<std::size_t>(d)]; }
  std::size_t degree_end(int d) const { return degree_offsets_[static_cast<std::size_t>(d) + 1]; }

  // Offset of position i inside the dense (K+1)^n tensor, axis 1 fastest.
  std::size_t dense_offset(std::size_t i) const { return dense_offsets_[i]; }
  std::size_t dense_size() const { return dense_lookup_.size(); }

 private:
  int n_;
  int K_;
  std::vector<MultiIndex> indices_;
  std::vector<std::size_t> degree_offsets_;
  std::vector<std::size_t> dense_offsets_;
  std::vector<std::ptrdiff_t> dense_lookup_;
};

}  // namespace grushin
