#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#ifdef _OPENMP
#include <omp.h>
#endif

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>

#include "audit/metrics.hpp"
#include "oracle.hpp"

using namespace audit;
namespace m = audit::metrics;

namespace {

std::vector<m::CanonicalTagSet> random_tag_sets(std::mt19937& g, int n, int max_tags = 8) {
  std::vector<m::CanonicalTagSet> out;
  for (int i = 0; i < n; ++i)
    out.push_back(m::normalize_hashtags(oracle::random_raw_tags(g, max_tags), {}));
  return out;
}

std::vector<std::vector<std::string>> as_plain(const std::vector<m::CanonicalTagSet>& v) {
  return {v.begin(), v.end()};
}

}  // namespace

TEST_CASE("jaccard worked example: 2 shared tags, union of 10 is exactly 20%") {
  m::CanonicalTagSet a = {"a1", "a2", "a3", "a4", "shared1", "shared2"};
  m::CanonicalTagSet b = {"b1", "b2", "b3", "b4", "shared1", "shared2"};
  CHECK(m::jaccard(a, b) == 0.20);
  CHECK(m::jaccard(b, a) == 0.20);
}

TEST_CASE("jaccard edge cases") {
  CHECK(m::jaccard({}, {}) == 0.0);
  CHECK(m::jaccard({"x"}, {}) == 0.0);
  CHECK(m::jaccard({"x"}, {"x"}) == 1.0);
}

TEST_CASE("basic match substring example and symmetry") {
  m::CanonicalTagSet a = {"cat"};
  m::CanonicalTagSet b = {"cutecat"};
  CHECK(m::basic_match(a, b) == 1.0);
  CHECK(m::basic_match(b, a) == 1.0);
  CHECK(m::basic_match({"dog"}, {"cat"}) == 0.0);
  CHECK(m::basic_match({}, {"cat"}) == 0.0);
}

TEST_CASE("normalize_hashtags canonicalizes, drops stoplisted and deduplicates") {
  auto tags = m::normalize_hashtags({"Cat", "#cat", "FYP", "", "dog!", "DOG"},
                                    m::default_stoplist());
  CHECK(tags == m::CanonicalTagSet{"cat", "dog"});
}

TEST_CASE("default stoplist contains the generic tags") {
  const auto& s = m::default_stoplist();
  for (const char* t : {"fyp", "foryou", "foryoupage", "viral", "trending", "fy"})
    CHECK(s.count(t) == 1);
  CHECK(s.size() == 6);
}

TEST_CASE("load_stoplist parses lines and comments") {
  auto path = std::filesystem::temp_directory_path() / "stoplist_test.txt";
  {
    std::ofstream out(path);
    out << "# generic tags\nFYP\n  viral  # inline\n\nforyou\n";
  }
  auto s = m::load_stoplist(path.string());
  CHECK(s == std::set<std::string>{"fyp", "viral", "foryou"});
  CHECK_THROWS_AS(m::load_stoplist("/nonexistent/stoplist"), ValidationError);
  std::filesystem::remove(path);
}

TEST_CASE("measure parsing") {
  CHECK(m::measure_from_string("jaccard") == m::Measure::jaccard);
  CHECK(m::measure_from_string("basic-match") == m::Measure::basic_match);
  CHECK(m::measure_from_string("basic_match") == m::Measure::basic_match);
  CHECK_THROWS_AS(m::measure_from_string("cosine"), ValidationError);
}

TEST_CASE("jaccard and basic_match agree with the set-based oracle") {
  std::mt19937 g(1);
  for (int it = 0; it < 2000; ++it) {
    auto a = m::normalize_hashtags(oracle::random_raw_tags(g, 8), {});
    auto b = m::normalize_hashtags(oracle::random_raw_tags(g, 8), {});
    CHECK(m::jaccard(a, b) == doctest::Approx(oracle::jaccard(a, b)).epsilon(1e-12));
    CHECK(m::basic_match(a, b) == oracle::basic_match(a, b));
  }
}

TEST_CASE("implication: basic_match zero forces jaccard zero") {
  std::mt19937 g(2);
  for (int it = 0; it < 10000; ++it) {
    auto a = m::normalize_hashtags(oracle::random_raw_tags(g, 6), {});
    auto b = m::normalize_hashtags(oracle::random_raw_tags(g, 6), {});
    if (m::basic_match(a, b) == 0.0) CHECK(m::jaccard(a, b) == 0.0);
  }
}

TEST_CASE("normalize_hashtags is idempotent") {
  std::mt19937 g(3);
  for (int it = 0; it < 10000; ++it) {
    auto once = m::normalize_hashtags(oracle::random_raw_tags(g, 8), m::default_stoplist());
    auto twice = m::normalize_hashtags(once, m::default_stoplist());
    CHECK(once == twice);
  }
}

TEST_CASE("set_similarity matches the double-loop oracle, cross and intra") {
  std::mt19937 g(4);
  for (int it = 0; it < 20; ++it) {
    auto a = random_tag_sets(g, 30 + it);
    auto b = random_tag_sets(g, 25 + it);
    for (auto measure : {m::Measure::jaccard, m::Measure::basic_match}) {
      bool ja = measure == m::Measure::jaccard;
      CHECK(m::set_similarity(a, b, measure) ==
            doctest::Approx(oracle::set_similarity(as_plain(a), as_plain(b), ja, false))
                .epsilon(1e-12));
      CHECK(m::set_similarity(a, a, measure) ==
            doctest::Approx(oracle::set_similarity(as_plain(a), as_plain(a), ja, true))
                .epsilon(1e-12));
    }
  }
}

TEST_CASE("set_similarity parallel kernel equals the serial reference") {
  std::mt19937 g(5);
  auto a = random_tag_sets(g, 200);
  auto b = random_tag_sets(g, 180);
  for (auto measure : {m::Measure::jaccard, m::Measure::basic_match}) {
    const double serial_cross = m::set_similarity_serial(a, b, measure);
    const double serial_intra = m::set_similarity_serial(a, a, measure);
#ifdef _OPENMP
    for (int threads : {1, 2, 3, 7}) {
      omp_set_num_threads(threads);
      CHECK(m::set_similarity(a, b, measure) == doctest::Approx(serial_cross).epsilon(1e-12));
      CHECK(m::set_similarity(a, a, measure) == doctest::Approx(serial_intra).epsilon(1e-12));
    }
    omp_set_num_threads(omp_get_num_procs());
#else
    CHECK(m::set_similarity(a, b, measure) == doctest::Approx(serial_cross).epsilon(1e-12));
    CHECK(m::set_similarity(a, a, measure) == doctest::Approx(serial_intra).epsilon(1e-12));
#endif
  }
}

TEST_CASE("set_similarity rejects empty and too-small intra inputs") {
  std::vector<m::CanonicalTagSet> one = {{"a"}};
  std::vector<m::CanonicalTagSet> none;
  CHECK_THROWS_AS(m::set_similarity(none, one, m::Measure::jaccard), ValidationError);
  CHECK_THROWS_AS(m::set_similarity(one, one, m::Measure::jaccard), ValidationError);
  std::vector<m::CanonicalTagSet> two = {{"a"}, {"b"}};
  CHECK_NOTHROW(m::set_similarity(two, two, m::Measure::jaccard));
}

TEST_CASE("popularity_delta against the oracle, mean and median") {
  std::mt19937 g(6);
  auto feed = oracle::random_feed(g, 160);
  m::WindowSpec w{50};
  CHECK(m::popularity_delta(feed, w, m::PopularityStat::mean) ==
        doctest::Approx(oracle::popularity_delta(feed, 50, true)).epsilon(1e-12));
  CHECK(m::popularity_delta(feed, w, m::PopularityStat::median) ==
        doctest::Approx(oracle::popularity_delta(feed, 50, false)).epsilon(1e-12));
}

TEST_CASE("popularity_delta input validation") {
  std::mt19937 g(7);
  auto feed = oracle::random_feed(g, 99);
  CHECK_THROWS_AS(m::popularity_delta(feed, m::WindowSpec{50}), ValidationError);
  auto zeros = oracle::random_feed(g, 100);
  for (auto& r : zeros) r.video.play_count = 0;
  CHECK_THROWS_AS(m::popularity_delta(zeros, m::WindowSpec{50}), ValidationError);
}

TEST_CASE("window_similarity_delta against the oracle") {
  std::mt19937 g(8);
  auto x = random_tag_sets(g, 120);
  auto y = random_tag_sets(g, 120);
  m::WindowSpec w{40};
  for (auto measure : {m::Measure::jaccard, m::Measure::basic_match}) {
    bool ja = measure == m::Measure::jaccard;
    CHECK(m::window_similarity_delta(x, y, w, measure) ==
          doctest::Approx(oracle::window_similarity_delta(as_plain(x), as_plain(y), 40, ja, false))
              .epsilon(1e-12));
    CHECK(m::window_similarity_delta(x, x, w, measure) ==
          doctest::Approx(oracle::window_similarity_delta(as_plain(x), as_plain(x), 40, ja, true))
              .epsilon(1e-12));
  }
  CHECK_THROWS_AS(m::window_similarity_delta(x, y, m::WindowSpec{100}, m::Measure::jaccard),
                  ValidationError);
}

TEST_CASE("interest_ratio_series against the oracle, including a ragged tail") {
  std::mt19937 g(9);
  auto feed = oracle::random_feed(g, 137);
  auto interests = InterestSpec::from_raw(default_interest_hashtags());
  auto got = m::interest_ratio_series(feed, interests, 25);
  auto want = oracle::interest_ratio_series(feed, interests.hashtags, 25);
  REQUIRE(got.size() == want.size());
  CHECK(got.size() == 6);  // 5 full buckets + 12 leftover
  for (std::size_t i = 0; i < got.size(); ++i) {
    CHECK(got[i].bucket_index == static_cast<int>(i));
    CHECK(got[i].ratio == doctest::Approx(want[i]).epsilon(1e-12));
  }
  CHECK_THROWS_AS(m::interest_ratio_series(feed, interests, 0), ValidationError);
}

TEST_CASE("fit_trend equals the normal-equation oracle and recovers exact lines") {
  std::vector<std::pair<double, double>> exact;
  for (int x = 0; x < 10; ++x) exact.emplace_back(x, 3.5 * x - 2.0);
  auto t = m::fit_trend(exact);
  CHECK(t.slope == doctest::Approx(3.5).epsilon(1e-12));
  CHECK(t.intercept == doctest::Approx(-2.0).epsilon(1e-12));

  std::mt19937 g(10);
  std::uniform_real_distribution<double> noise(-1.0, 1.0);
  for (int it = 0; it < 50; ++it) {
    std::vector<std::pair<double, double>> pts;
    for (int x = 0; x < 20; ++x) pts.emplace_back(x, 0.3 * x + noise(g));
    auto got = m::fit_trend(pts);
    auto [slope, intercept] = oracle::fit_line(pts);
    CHECK(got.slope == doctest::Approx(slope).epsilon(1e-9));
    CHECK(got.intercept == doctest::Approx(intercept).epsilon(1e-9));
  }

  std::vector<std::pair<double, double>> degenerate = {{1.0, 2.0}, {1.0, 3.0}};
  CHECK_THROWS_AS(m::fit_trend(degenerate), ValidationError);
  std::vector<std::pair<double, double>> single = {{1.0, 2.0}};
  CHECK_THROWS_AS(m::fit_trend(single), ValidationError);
}

TEST_CASE("noise_baseline enumerates cross pairs and intra values") {
  std::mt19937 g(11);
  std::vector<std::vector<m::CanonicalTagSet>> feeds;
  for (int i = 0; i < 4; ++i) feeds.push_back(random_tag_sets(g, 40));
  auto nb = m::noise_baseline(feeds, m::Measure::jaccard);
  REQUIRE(nb.cross_pairs.size() == 6);
  REQUIRE(nb.intra.size() == 4);
  double sum = 0, lo = nb.cross_pairs[0].value, hi = nb.cross_pairs[0].value;
  for (const auto& p : nb.cross_pairs) {
    CHECK(p.value ==
          doctest::Approx(oracle::set_similarity(as_plain(feeds[p.a]), as_plain(feeds[p.b]), true,
                                                 false))
              .epsilon(1e-12));
    sum += p.value;
    lo = std::min(lo, p.value);
    hi = std::max(hi, p.value);
  }
  CHECK(nb.mean == doctest::Approx(sum / 6.0).epsilon(1e-12));
  CHECK(nb.min == lo);
  CHECK(nb.max == hi);
  for (const auto& p : nb.intra)
    CHECK(p.value ==
          doctest::Approx(
              oracle::set_similarity(as_plain(feeds[p.a]), as_plain(feeds[p.a]), true, true))
              .epsilon(1e-12));
  CHECK_THROWS_AS(m::noise_baseline({feeds[0]}, m::Measure::jaccard), ValidationError);
}

TEST_CASE("sign_test_p matches exact binomial values") {
  // Reference values computed from the binomial CDF with p = 1/2.
  CHECK(m::sign_test_p(0, 0) == 1.0);
  CHECK(m::sign_test_p(5, 5) == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(m::sign_test_p(10, 0) == doctest::Approx(2.0 / 1024.0).epsilon(1e-9));
  CHECK(m::sign_test_p(9, 1) == doctest::Approx(2.0 * 11.0 / 1024.0).epsilon(1e-9));
  CHECK(m::sign_test_p(15, 5) == doctest::Approx(2.0 * 21700.0 / 1048576.0).epsilon(1e-9));
  CHECK(m::sign_test_p(5, 15) == m::sign_test_p(15, 5));
}

TEST_CASE("feed_tag_sets drops ads and livestreams and normalizes in order") {
  std::mt19937 g(12);
  auto feed = oracle::random_feed(g, 20);
  feed[3].video.is_ad = true;
  feed[7].video.is_live = true;
  auto tags = m::feed_tag_sets(feed, m::default_stoplist());
  REQUIRE(tags.size() == 18);
  std::size_t k = 0;
  for (std::size_t i = 0; i < feed.size(); ++i) {
    if (feed[i].video.is_ad || feed[i].video.is_live) continue;
    CHECK(tags[k] == m::normalize_hashtags(feed[i].video.hashtags, m::default_stoplist()));
    ++k;
  }
}
