#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "audit/metrics.hpp"
#include "audit/rng.hpp"

using namespace audit;

namespace {

std::vector<metrics::CanonicalTagSet> random_feed(std::size_t n, Rng& rng) {
  static const std::vector<std::string> pool = {
      "cat", "cutecat", "dog", "gaming", "gta6", "minecraft", "food", "cooking",
      "movie", "film", "comedy", "lol", "travel", "music", "dance", "news"};
  std::vector<metrics::CanonicalTagSet> feed(n);
  for (auto& tags : feed) {
    const std::size_t k = 2 + rng.next_below(5);
    std::vector<std::string> raw;
    for (std::size_t i = 0; i < k; ++i) raw.push_back(pool[rng.next_below(pool.size())]);
    tags = metrics::normalize_hashtags(raw, {});
  }
  return feed;
}

double time_ms(const std::function<double()>& f, double* result) {
  const auto t0 = std::chrono::steady_clock::now();
  *result = f();
  const auto t1 = std::chrono::steady_clock::now();
  return std::chrono::duration<double, std::milli>(t1 - t0).count();
}

}  // namespace

int main(int argc, char** argv) {
  std::size_t n = argc > 1 ? static_cast<std::size_t>(std::atol(argv[1])) : 1500;
  Rng rng(7);
  const auto a = random_feed(n, rng);
  const auto b = random_feed(n, rng);

#ifdef _OPENMP
  std::printf("openmp: %d threads\n", omp_get_max_threads());
#else
  std::printf("openmp: disabled\n");
#endif
  std::printf("%zu x %zu pairs\n", n, n);

  for (auto m : {metrics::Measure::jaccard, metrics::Measure::basic_match}) {
    double serial_v = 0, parallel_v = 0;
    const double ts = time_ms([&] { return metrics::set_similarity_serial(a, b, m); }, &serial_v);
    const double tp = time_ms([&] { return metrics::set_similarity(a, b, m); }, &parallel_v);
    std::printf("%-11s serial %8.1f ms  parallel %8.1f ms  speedup %.2fx  |diff| %.3e\n",
                metrics::to_string(m).c_str(), ts, tp, ts / tp,
                std::abs(serial_v - parallel_v));
  }
  return 0;
}
