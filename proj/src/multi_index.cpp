#include "grushin/multi_index.hpp"

#include <map>
#include <mutex>
#include <numeric>
#include <string>
#include <utility>

#include "grushin/errors.hpp"

namespace grushin {

MultiIndex::MultiIndex(std::vector<int> entries) : entries_(std::move(entries)) {
  if (entries_.empty() || entries_.size() > static_cast<std::size_t>(kMaxDim))
    throw DomainError("multi-index dimension must lie in [1, 3]");
  for (int a : entries_) {
    if (a < 0) throw DomainError("multi-index entries must be non-negative");
  }
  degree_ = std::accumulate(entries_.begin(), entries_.end(), 0);
}

MultiIndex MultiIndex::zero(int n) { return MultiIndex(std::vector<int>(static_cast<std::size_t>(n), 0)); }

MultiIndex MultiIndex::unit(int n, int j) {
  if (j < 1 || j > n) throw DomainError("axis index out of range");
  std::vector<int> e(static_cast<std::size_t>(n), 0);
  e[static_cast<std::size_t>(j - 1)] = 1;
  return MultiIndex(std::move(e));
}

MultiIndex MultiIndex::operator+(const MultiIndex& other) const {
  if (other.dim() != dim()) throw DomainError("multi-index dimension mismatch");
  std::vector<int> e(entries_);
  for (std::size_t i = 0; i < e.size(); ++i) e[i] += other.entries_[i];
  return MultiIndex(std::move(e));
}

namespace {

// Compositions of d into the remaining axes, first axis largest first.
void compositions(int d, int axis, std::vector<int>& cur, std::vector<MultiIndex>& out) {
  const int n = static_cast<int>(cur.size());
  if (axis == n - 1) {
    cur[static_cast<std::size_t>(axis)] = d;
    out.emplace_back(cur);
    return;
  }
  for (int a = d; a >= 0; --a) {
    cur[static_cast<std::size_t>(axis)] = a;
    compositions(d - a, axis + 1, cur, out);
  }
}

}  // namespace

SimplexLayout::SimplexLayout(int n, int K) : n_(n), K_(K) {
  if (n < 1 || n > kMaxDim) throw DomainError("spatial dimension must lie in [1, 3]");
  if (K < 0) throw DomainError("truncation degree must be non-negative");

  degree_offsets_.push_back(0);
  std::vector<int> cur(static_cast<std::size_t>(n), 0);
  for (int d = 0; d <= K; ++d) {
    compositions(d, 0, cur, indices_);
    degree_offsets_.push_back(indices_.size());
  }

  std::size_t dense = 1;
  for (int a = 0; a < n; ++a) dense *= static_cast<std::size_t>(K + 1);
  dense_lookup_.assign(dense, -1);
  dense_offsets_.resize(indices_.size());
  for (std::size_t i = 0; i < indices_.size(); ++i) {
    std::size_t off = 0;
    std::size_t stride = 1;
    for (int a = 0; a < n; ++a) {
      off += static_cast<std::size_t>(indices_[i][a]) * stride;
      stride *= static_cast<std::size_t>(K + 1);
    }
    dense_offsets_[i] = off;
    dense_lookup_[off] = static_cast<std::ptrdiff_t>(i);
  }
}

std::shared_ptr<const SimplexLayout> SimplexLayout::get(int n, int K) {
  static std::mutex mutex;
  static std::map<std::pair<int, int>, std::shared_ptr<const SimplexLayout>> cache;
  std::lock_guard lock(mutex);
  auto& slot = cache[{n, K}];
  if (!slot) slot = std::make_shared<const SimplexLayout>(n, K);
  return slot;
}

std::ptrdiff_t SimplexLayout::index_of(std::span<const int> alpha) const {
  if (static_cast<int>(alpha.size()) != n_) return -1;
  std::size_t off = 0;
  std::size_t stride = 1;
  int degree = 0;
  for (int a = 0; a < n_; ++a) {
    const int v = alpha[static_cast<std::size_t>(a)];
    if (v < 0) return -1;
    degree += v;
    if (degree > K_) return -1;
    off += static_cast<std::size_t>(v) * stride;
    stride *= static_cast<std::size_t>(K_ + 1);
  }
  return dense_lookup_[off];
}

}  // namespace grushin
