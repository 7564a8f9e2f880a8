#include "amak/clustering.hpp"
#include "amak/error.hpp"
#include "amak/experts.hpp"
#include "support.hpp"

#include <doctest.h>

#include <random>

using namespace amak;
using doctest::Approx;

namespace {

std::vector<MarketVector> as_vectors(const std::vector<Features>& fs, std::size_t w = 1) {
    std::vector<MarketVector> out;
    for (std::size_t i = 0; i < fs.size(); ++i) out.push_back({fs[i], w, i});
    return out;
}

bool every_vector_on_nearest(const ClusterModel& m) {
    for (std::size_t i = 0; i < m.store().size(); ++i) {
        const auto& v = m.store()[i].v;
        const double own = manhattan(v, m.centroids()[m.assignment()[i]]);
        for (const auto& c : m.centroids())
            if (manhattan(v, c) < own) return false;
    }
    return true;
}

ClusterModel model_with(const std::vector<Features>& centroids) {
    // A converged run on the centroids themselves reproduces them exactly.
    return kmu_online(as_vectors(centroids), centroids.size(), {}, 1).model;
}

}  // namespace

TEST_CASE("manhattan distance") {
    const Features a{1, 2, 3, 4}, b{4, 3, 2, 1};
    CHECK(manhattan(a, a) == 0.0);
    CHECK(manhattan(Features{0, 0, 0, 0}, Features{1, 1, 1, 1}) == 4.0);
    CHECK(manhattan(a, b) == 8.0);
}

TEST_CASE("nearest centroid") {
    const auto m = model_with({{0, 0, 0, 0}, {10, 0, 0, 0}, {0, 10, 0, 0}});
    const auto c2 = m.centroids()[2];
    CHECK(m.nearest(c2) == 2);
    CHECK(model_with({{3, 3, 3, 3}}).nearest(Features{100, -5, 2, 0}) == 0);

    const auto pair = model_with({{0, 0, 0, 0}, {2, 0, 0, 0}});
    CHECK(pair.nearest(Features{1, 0, 0, 0}) == 0);  // equidistant, lowest index wins
}

TEST_CASE("two separated clouds are recovered") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> jitter(-0.01, 0.01);
    std::vector<Features> fs;
    for (int i = 0; i < 10; ++i) fs.push_back({jitter(rng), jitter(rng), jitter(rng), jitter(rng)});
    for (int i = 0; i < 10; ++i) fs.push_back({10 + jitter(rng), 10 + jitter(rng), 10 + jitter(rng), 10 + jitter(rng)});
    const auto res = kmu_online(as_vectors(fs), 2, {}, 9);
    const auto& a = res.model.assignment();
    for (int i = 1; i < 10; ++i) CHECK(a[i] == a[0]);
    for (int i = 11; i < 20; ++i) CHECK(a[i] == a[10]);
    CHECK(a[0] != a[10]);
    for (const auto& c : res.model.centroids()) {
        const double target = c[0] < 5 ? 0.0 : 10.0;
        for (double x : c) CHECK(std::abs(x - target) < 0.1);
    }
}

TEST_CASE("identical vectors with one centroid") {
    const Features f{1, 2, 3, 4};
    const auto res = kmu_online(as_vectors(std::vector<Features>(8, f)), 1, {}, 3);
    CHECK(res.model.centroids() == std::vector<Features>{f});
    CHECK(res.stats.converged);
    CHECK(res.stats.last_fraction == 0.0);
}

TEST_CASE("one centroid sits at the mean") {
    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> u(-3, 3);
    std::vector<Features> fs(15);
    Features mean{};
    for (auto& f : fs)
        for (int k = 0; k < 4; ++k) {
            f[k] = u(rng);
            mean[k] += f[k] / 15.0;
        }
    const auto res = kmu_online(as_vectors(fs), 1, {}, 1);
    for (int k = 0; k < 4; ++k) CHECK(res.model.centroids()[0][k] == Approx(mean[k]).epsilon(1e-12));
}

TEST_CASE("centroid count is clamped to the distinct vectors") {
    const auto res = kmu_online(as_vectors({{1, 1, 1, 1}, {1, 1, 1, 1}, {2, 2, 2, 2}}), 5, {}, 1);
    CHECK(res.stats.requested == 5);
    CHECK(res.stats.used == 2);
    CHECK(res.model.centroids().size() == 2);
}

TEST_CASE("termination leaves every vector on its nearest centroid") {
    std::mt19937_64 rng(21);
    std::uniform_real_distribution<double> u(0, 1);
    for (int trial = 0; trial < 30; ++trial) {
        std::vector<Features> fs(5 + trial * 3);
        for (auto& f : fs)
            for (auto& x : f) x = u(rng);
        ClusterOptions tight;
        tight.max_attempts = 1 + trial % 3;
        tight.max_passes = 1 + trial % 4;
        const auto res = kmu_online(as_vectors(fs), 1 + trial % 6, tight, trial);
        CHECK(every_vector_on_nearest(res.model));
        CHECK(res.stats.attempts <= tight.max_attempts);
    }
}

TEST_CASE("seeded runs are reproducible") {
    std::mt19937_64 rng(2);
    std::uniform_real_distribution<double> u(0, 1);
    std::vector<Features> fs(40);
    for (auto& f : fs)
        for (auto& x : f) x = u(rng);
    const auto a = kmu_online(as_vectors(fs), 4, {}, 77);
    const auto b = kmu_online(as_vectors(fs), 4, {}, 77);
    CHECK(a.model.centroids() == b.model.centroids());
    CHECK(a.model.assignment() == b.model.assignment());
}

TEST_CASE("bad arguments") {
    CHECK_THROWS_AS(kmu_online({}, 1, {}, 0), Error);
    CHECK_THROWS_AS(kmu_online(as_vectors({{0, 0, 0, 0}}), 0, {}, 0), Error);
    ClusterOptions bad;
    bad.epsilon = 0.0;
    CHECK_THROWS_AS(kmu_online(as_vectors({{0, 0, 0, 0}}), 1, bad, 0), Error);
}

TEST_CASE("cluster similar days") {
    SUBCASE("a lone current window has no co-members") {
        const auto m = kmu_online(as_vectors({{0, 0, 0, 0}, {0, 0, 0, 0}, {9, 9, 9, 9}}), 2, {}, 1).model;
        CHECK(cluster_similar_set(m, 2, 1).empty());
        CHECK(cluster_similar_set(m, 2, 1).source == SimilaritySource::empty);
    }
    SUBCASE("co-members of the current window") {
        std::vector<Features> fs;
        for (int d = 0; d < 10; ++d) fs.push_back(d % 2 == 0 ? Features{0, 0, 0, 0} : Features{5, 5, 5, 5});
        const auto m = kmu_online(as_vectors(fs), 2, {}, 4).model;
        const auto set = cluster_similar_set(m, 8, 1);
        CHECK(set.days == std::vector<std::size_t>{1, 3, 5, 7});
        CHECK(set.source == SimilaritySource::cluster);
    }
    SUBCASE("one centroid groups everything") {
        std::vector<Features> fs;
        for (int d = 0; d < 10; ++d) fs.push_back({double(d), 0, 0, 0});
        const auto m = kmu_online(as_vectors(fs), 1, {}, 4).model;
        const auto set = cluster_similar_set(m, 9, 1);
        CHECK(set.days == std::vector<std::size_t>{1, 2, 3, 4, 5, 6, 7, 8, 9});
    }
}

TEST_CASE("lifecycle schedule for d = 10") {
    const auto x = testing::random_relatives(120, 3, 13);
    ClusterLifecycleConfig cfg;
    cfg.d = 10;
    cfg.max_window = 5;
    cfg.seed = 1;
    auto memory_at = [&](std::size_t t) { return RelativesView(x, t - (10 + t % 10), t); };
    ClusterLifecycle life(cfg, RelativesView(x, 0, 10));
    CHECK(life.target_centroids() == 3);

    std::vector<std::size_t> sizes_before;
    for (std::size_t w = 1; w <= 5; ++w) sizes_before.push_back(life.model(w).store().size());

    for (std::size_t t = 11; t <= 100; ++t) {
        const auto memory = memory_at(t);
        const auto ev = life.step(memory);
        if (t % 20 == 0) {
            CHECK(ev == LifecycleEvent::reset);
            CHECK(life.target_centroids() == 3);
        } else if (t % 3 == 0) {
            CHECK(ev == LifecycleEvent::add_centroid);
        } else {
            CHECK(ev == LifecycleEvent::none);
        }
        if (t == 11) {
            for (std::size_t w = 1; w <= 5; ++w) CHECK(life.model(w).store().size() == sizes_before[w - 1] + 1);
        }
        for (std::size_t w = 1; w <= 5; ++w) {
            const auto& model = life.model(w);
            CHECK(every_vector_on_nearest(model));
            CHECK(model.store().back().day == t - 1);
            for (const auto& v : model.store()) CHECK(v.day + 1 >= memory.begin() + w);
        }
    }
    CHECK_THROWS_AS(life.step(memory_at(100)), Error);
}

TEST_CASE("lifecycle config validation") {
    ClusterLifecycleConfig cfg;
    cfg.d = 2;
    cfg.max_window = 1;
    CHECK_THROWS_AS(cfg.validate(), Error);
    cfg.d = 5;
    cfg.max_window = 5;
    CHECK_THROWS_AS(cfg.validate(), Error);
}
