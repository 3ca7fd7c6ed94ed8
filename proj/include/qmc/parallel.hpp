#ifndef QMC_PARALLEL_HPP
#define QMC_PARALLEL_HPP

#include <cstddef>
#include <cstdint>
#include <functional>
#include <vector>

namespace qmc {

/// Thread count: `requested` if > 0, else $QMC_THREADS, else hardware concurrency.
int resolve_threads(int requested = 0);

/// Fixed work-unit size for reductions. Results depend on this, never on the
/// number of threads.
inline constexpr std::uint64_t kReductionChunk = 4096;

/// Runs body(chunk_index, begin, end) over [0, count) split into fixed-size
/// chunks, distributing chunks over `threads` workers.
void for_each_chunk(std::uint64_t count, int threads,
                    const std::function<void(std::size_t, std::uint64_t, std::uint64_t)>& body,
                    std::uint64_t chunk = kReductionChunk);

/// Pairwise (tree) reduction of per-chunk partial sums in index order.
template <typename T>
T pairwise_sum(std::vector<T> parts) {
  if (parts.empty()) return T{};
  while (parts.size() > 1) {
    std::vector<T> next;
    next.reserve((parts.size() + 1) / 2);
    for (std::size_t i = 0; i + 1 < parts.size(); i += 2) next.push_back(parts[i] + parts[i + 1]);
    if (parts.size() % 2 == 1) next.push_back(parts.back());
    parts = std::move(next);
  }
  return parts.front();
}

/// Neumaier-compensated accumulator.
template <typename T>
class CompensatedSum {
 public:
  void add(T x) {
    const T t = sum_ + x;
    if (abs_(sum_) >= abs_(x))
      comp_ += (sum_ - t) + x;
    else
      comp_ += (x - t) + sum_;
    sum_ = t;
  }
  T value() const { return sum_ + comp_; }

 private:
  static auto abs_(T v) { return v < T(0) ? -v : v; }
  T sum_{};
  T comp_{};
};

}  // namespace qmc

#endif  // QMC_PARALLEL_HPP
