#include "fil/kernels.hpp"

#include <algorithm>
#include <exception>
#include <mutex>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace fil::kernels {
namespace {

constexpr int kDeck = 52;

void count_hands_with_first(int a, CategoryCounts& counts) {
  std::array<int, 5> hand{a, 0, 0, 0, 0};
  for (int b = a + 1; b < kDeck; ++b) {
    hand[1] = b;
    for (int c = b + 1; c < kDeck; ++c) {
      hand[2] = c;
      for (int d = c + 1; d < kDeck; ++d) {
        hand[3] = d;
        for (int e = d + 1; e < kDeck; ++e) {
          hand[4] = e;
          ++counts[classify_hand(hand)];
        }
      }
    }
  }
}

// Depth-first walk over every outcome whose first draw is a fixed element.
class OutcomeWalker {
 public:
  OutcomeWalker(std::span<const std::size_t> labels, unsigned n, SamplingMode mode,
                const OutcomeKey& key, OutcomeCounts& counts)
      : labels_(labels), n_(n), mode_(mode), key_(key), counts_(counts),
        drawn_(n), used_(labels.size(), 0) {}

  void run_from(std::size_t first) {
    drawn_[0] = labels_[first];
    used_[first] = 1;
    descend(1, first + 1);
    used_[first] = 0;
  }

 private:
  void descend(unsigned depth, std::size_t next) {
    if (depth == n_) {
      ++counts_[key_(std::span<const std::size_t>(drawn_))];
      return;
    }
    const std::size_t size = labels_.size();
    switch (mode_) {
      case SamplingMode::WithoutReplacementSubsets:
        for (std::size_t i = next; i + (n_ - depth) <= size; ++i) {
          drawn_[depth] = labels_[i];
          descend(depth + 1, i + 1);
        }
        break;
      case SamplingMode::WithoutReplacementOrdered:
        for (std::size_t i = 0; i < size; ++i) {
          if (used_[i]) continue;
          used_[i] = 1;
          drawn_[depth] = labels_[i];
          descend(depth + 1, 0);
          used_[i] = 0;
        }
        break;
      case SamplingMode::WithReplacementIid:
        for (std::size_t i = 0; i < size; ++i) {
          drawn_[depth] = labels_[i];
          descend(depth + 1, 0);
        }
        break;
    }
  }

  std::span<const std::size_t> labels_;
  unsigned n_;
  SamplingMode mode_;
  const OutcomeKey& key_;
  OutcomeCounts& counts_;
  std::vector<std::size_t> drawn_;
  std::vector<char> used_;
};

std::size_t first_draw_count(std::size_t population, unsigned n, SamplingMode mode) {
  if (n == 0 || population == 0) return 0;
  if (mode == SamplingMode::WithReplacementIid) return population;
  if (n > population) return 0;
  if (mode == SamplingMode::WithoutReplacementSubsets) return population - n + 1;
  return population;
}

void merge_into(OutcomeCounts& total, const OutcomeCounts& part) {
  for (const auto& [value, count] : part) total[value] += count;
}

template <typename T>
T convolve_at(std::span<const T> a, std::span<const T> b, std::size_t s) {
  const std::size_t lo = s >= b.size() - 1 ? s - (b.size() - 1) : 0;
  const std::size_t hi = std::min(s, a.size() - 1);
  T acc = 0;
  for (std::size_t i = lo; i <= hi; ++i) acc += a[i] * b[s - i];
  return acc;
}

template <typename T>
std::vector<T> convolve_serial(std::span<const T> a, std::span<const T> b) {
  if (a.empty() || b.empty()) return {};
  std::vector<T> out(a.size() + b.size() - 1);
  for (std::size_t s = 0; s < out.size(); ++s) out[s] = convolve_at(a, b, s);
  return out;
}

template <typename T>
std::vector<T> convolve_parallel(std::span<const T> a, std::span<const T> b) {
  if (a.empty() || b.empty()) return {};
  std::vector<T> out(a.size() + b.size() - 1);
  const auto size = static_cast<std::int64_t>(out.size());
#pragma omp parallel for schedule(static)
  for (std::int64_t s = 0; s < size; ++s) {
    out[s] = convolve_at(a, b, static_cast<std::size_t>(s));
  }
  return out;
}

}  // namespace

bool openmp_enabled() {
#ifdef _OPENMP
  return true;
#else
  return false;
#endif
}

int max_threads() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

int classify_hand(const std::array<int, 5>& cards) {
  std::array<int, 13> rank_counts{};
  bool flush = true;
  const int suit = cards[0] % 4;
  for (int c : cards) {
    ++rank_counts[c / 4];
    flush = flush && (c % 4 == suit);
  }
  int distinct = 0;
  int low = 13;
  int high = -1;
  std::array<int, 5> multiplicity{};  // multiplicity[m] = ranks seen m times
  for (int r = 0; r < 13; ++r) {
    if (rank_counts[r] == 0) continue;
    ++distinct;
    low = std::min(low, r);
    high = std::max(high, r);
    ++multiplicity[rank_counts[r]];
  }
  const bool wheel = distinct == 5 && rank_counts[12] && rank_counts[0] &&
                     rank_counts[1] && rank_counts[2] && rank_counts[3];
  const bool straight = distinct == 5 && (high - low == 4 || wheel);

  if (straight && flush) return 8;
  if (multiplicity[4] == 1) return 7;
  if (multiplicity[3] == 1 && multiplicity[2] == 1) return 6;
  if (flush) return 5;
  if (straight) return 4;
  if (multiplicity[3] == 1) return 3;
  if (multiplicity[2] == 2) return 2;
  if (multiplicity[2] == 1) return 1;
  return 0;
}

// ---------------------------------------------------------------------------

namespace serial {

CategoryCounts poker_category_counts() {
  CategoryCounts counts{};
  for (int a = 0; a < kDeck; ++a) count_hands_with_first(a, counts);
  return counts;
}

OutcomeCounts enumerate_population(std::span<const std::size_t> element_labels,
                                   unsigned n, SamplingMode mode,
                                   const OutcomeKey& key) {
  OutcomeCounts counts;
  OutcomeWalker walker(element_labels, n, mode, key, counts);
  const std::size_t firsts = first_draw_count(element_labels.size(), n, mode);
  for (std::size_t f = 0; f < firsts; ++f) walker.run_from(f);
  return counts;
}

std::vector<Rational> convolve(std::span<const Rational> a, std::span<const Rational> b) {
  return convolve_serial(a, b);
}

std::vector<double> convolve(std::span<const double> a, std::span<const double> b) {
  return convolve_serial(a, b);
}

std::vector<double> evaluate_grid(std::span<const double> grid,
                                  const std::function<double(double)>& f) {
  std::vector<double> out(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) out[i] = f(grid[i]);
  return out;
}

}  // namespace serial

// ---------------------------------------------------------------------------

namespace omp {

CategoryCounts poker_category_counts() {
  CategoryCounts total{};
  std::mutex merge;
#pragma omp parallel
  {
    CategoryCounts local{};
#pragma omp for schedule(dynamic, 1)
    for (int a = 0; a < kDeck; ++a) count_hands_with_first(a, local);
    std::lock_guard lock(merge);
    for (std::size_t i = 0; i < total.size(); ++i) total[i] += local[i];
  }
  return total;
}

OutcomeCounts enumerate_population(std::span<const std::size_t> element_labels,
                                   unsigned n, SamplingMode mode,
                                   const OutcomeKey& key) {
  OutcomeCounts total;
  const auto firsts =
      static_cast<std::int64_t>(first_draw_count(element_labels.size(), n, mode));
  std::mutex merge;
  std::exception_ptr failure;
#pragma omp parallel
  {
    OutcomeCounts local;
    OutcomeWalker walker(element_labels, n, mode, key, local);
#pragma omp for schedule(dynamic, 1)
    for (std::int64_t f = 0; f < firsts; ++f) {
      try {
        walker.run_from(static_cast<std::size_t>(f));
      } catch (...) {
        std::lock_guard lock(merge);
        if (!failure) failure = std::current_exception();
      }
    }
    std::lock_guard lock(merge);
    merge_into(total, local);
  }
  if (failure) std::rethrow_exception(failure);
  return total;
}

std::vector<Rational> convolve(std::span<const Rational> a, std::span<const Rational> b) {
  return convolve_parallel(a, b);
}

std::vector<double> convolve(std::span<const double> a, std::span<const double> b) {
  return convolve_parallel(a, b);
}

std::vector<double> evaluate_grid(std::span<const double> grid,
                                  const std::function<double(double)>& f) {
  std::vector<double> out(grid.size());
  const auto size = static_cast<std::int64_t>(grid.size());
  std::mutex guard;
  std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic, 4)
  for (std::int64_t i = 0; i < size; ++i) {
    try {
      out[i] = f(grid[i]);
    } catch (...) {
      std::lock_guard lock(guard);
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
  return out;
}

}  // namespace omp
}  // namespace fil::kernels
