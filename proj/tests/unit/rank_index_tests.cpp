#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include "doctest.h"
#include "popmarket/errors.hpp"
#include "popmarket/rank_index.hpp"
#include "popmarket/rng.hpp"

using namespace popmarket;

namespace {

std::vector<std::int64_t> v64(std::initializer_list<std::int64_t> xs) { return xs; }

double naive_total_weight(const std::vector<std::int64_t>& counts, double alpha,
                          TieRankMode mode) {
    double total = 0.0;
    for (std::int64_t r : naive_ranks(counts, mode)) {
        total += std::pow(static_cast<double>(r), -alpha);
    }
    return total;
}

}  // namespace

TEST_SUITE("rank_index") {

TEST_CASE("naive_ranks hand-checked values") {
    CHECK(naive_ranks(v64({3, 1, 2}), TieRankMode::max_rank) == v64({1, 3, 2}));
    CHECK(naive_ranks(v64({7}), TieRankMode::max_rank) == v64({1}));
    CHECK(naive_ranks(v64({7}), TieRankMode::min_rank) == v64({1}));
    CHECK(naive_ranks(v64({4, 4, 4, 1}), TieRankMode::max_rank) == v64({3, 3, 3, 4}));
    CHECK(naive_ranks(v64({4, 4, 4, 1}), TieRankMode::min_rank) == v64({1, 1, 1, 4}));
    CHECK(naive_ranks(v64({5, 5, 3}), TieRankMode::max_rank) == v64({2, 2, 3}));
    CHECK(naive_ranks(v64({5, 5, 3}), TieRankMode::min_rank) == v64({1, 1, 3}));
    CHECK(naive_ranks(v64({1, 1, 1}), TieRankMode::max_rank) == v64({3, 3, 3}));
    CHECK(naive_ranks(v64({1, 1, 1}), TieRankMode::min_rank) == v64({1, 1, 1}));
}

TEST_CASE("naive_ranks rejects empty input") {
    CHECK_THROWS_AS(naive_ranks({}, TieRankMode::max_rank), InvalidInputError);
}

TEST_CASE("build matches naive ranks and weight") {
    const auto counts = v64({5, 5, 3, 9, 1, 1});
    for (TieRankMode mode : {TieRankMode::max_rank, TieRankMode::min_rank}) {
        for (double alpha : {0.0, 0.7, 1.0, 2.5}) {
            RankIndex index(counts, alpha, mode);
            CHECK(index.ranks() == naive_ranks(counts, mode));
            CHECK(index.counts() == counts);
            CHECK(index.total_weight() ==
                  doctest::Approx(naive_total_weight(counts, alpha, mode)).epsilon(1e-12));
        }
    }
}

TEST_CASE("build rejects empty counts") {
    CHECK_THROWS_AS(RankIndex(std::vector<std::int64_t>{}, 1.0, TieRankMode::max_rank),
                    InvalidInputError);
}

TEST_CASE("increment hand-checked transitions") {
    RankIndex a(v64({1, 1}), 1.0, TieRankMode::max_rank);
    a.increment(0);
    CHECK(a.counts() == v64({2, 1}));
    CHECK(a.ranks() == v64({1, 2}));

    RankIndex b(v64({2, 1}), 1.0, TieRankMode::max_rank);
    b.increment(1);
    CHECK(b.counts() == v64({2, 2}));
    CHECK(b.ranks() == v64({2, 2}));
}

TEST_CASE("increment rejects invalid item") {
    RankIndex index(v64({1, 1, 1}), 1.0, TieRankMode::max_rank);
    CHECK_THROWS_AS(index.increment(3), InvalidInputError);
}

TEST_CASE("differential: 10^4 random increments match the oracle, both modes") {
    for (TieRankMode mode : {TieRankMode::max_rank, TieRankMode::min_rank}) {
        const std::size_t n = 50;
        std::vector<std::int64_t> counts(n, 1);
        RankIndex index(counts, 1.3, mode);
        RandomStream rng(mode == TieRankMode::max_rank ? 42 : 43);
        for (int step = 0; step < 10000; ++step) {
            // Bias some increments toward already-popular items so long
            // streaks and deep blocks both occur.
            const std::size_t item = rng.bernoulli(0.5)
                ? index.sample(rng)
                : static_cast<std::size_t>(rng.next_index(n));
            counts[item] += 1;
            index.increment(item);
            REQUIRE(index.counts() == counts);
            REQUIRE(index.ranks() == naive_ranks(counts, mode));
            const double expected = naive_total_weight(counts, 1.3, mode);
            REQUIRE(std::abs(index.total_weight() - expected) <= 1e-9 * expected);
        }
    }
}

TEST_CASE("max_rank locality: only the item and the count-above block move") {
    RandomStream rng(7);
    const std::size_t n = 40;
    std::vector<std::int64_t> counts(n, 1);
    RankIndex index(counts, 1.0, TieRankMode::max_rank);
    for (int step = 0; step < 3000; ++step) {
        const auto before = index.ranks();
        const std::size_t item = static_cast<std::size_t>(rng.next_index(n));
        const std::int64_t c = counts[item];
        index.increment(item);
        counts[item] += 1;
        const auto after = index.ranks();
        for (std::size_t j = 0; j < n; ++j) {
            if (j == item) continue;
            if (counts[j] == c + 1) continue;  // pre-existing c+1 block absorbs the item
            REQUIRE(after[j] == before[j]);
        }
    }
}

TEST_CASE("rank bounds and order properties") {
    RandomStream rng(11);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t n = 2 + rng.next_index(30);
        std::vector<std::int64_t> counts(n);
        for (auto& c : counts) c = 1 + static_cast<std::int64_t>(rng.next_index(6));
        for (TieRankMode mode : {TieRankMode::max_rank, TieRankMode::min_rank}) {
            const auto ranks = naive_ranks(counts, mode);
            for (std::size_t i = 0; i < n; ++i) {
                REQUIRE(ranks[i] >= 1);
                REQUIRE(ranks[i] <= static_cast<std::int64_t>(n));
                for (std::size_t j = 0; j < n; ++j) {
                    if (counts[i] == counts[j]) REQUIRE(ranks[i] == ranks[j]);
                    if (counts[i] > counts[j]) REQUIRE(ranks[i] < ranks[j]);
                }
            }
        }
    }
}

TEST_CASE("sampling matches the rank-power law") {
    struct Case {
        std::vector<std::int64_t> counts;
        double alpha;
        std::vector<double> expected;
    };
    // counts [3,2,1] -> ranks [1,2,3]; counts [5,5,3] -> max ranks [2,2,3].
    const Case cases[] = {
        {{1, 1, 1, 1}, 1.0, {0.25, 0.25, 0.25, 0.25}},
        {{3, 2, 1}, 1.0, {6.0 / 11, 3.0 / 11, 2.0 / 11}},
        {{5, 5, 3}, 2.0, {9.0 / 22, 9.0 / 22, 4.0 / 22}},
        {{10, 5, 1}, 0.0, {1.0 / 3, 1.0 / 3, 1.0 / 3}},
    };
    const int draws = 1000000;
    int case_id = 0;
    for (const Case& c : cases) {
        RankIndex index(c.counts, c.alpha, TieRankMode::max_rank);
        RandomStream rng(100 + case_id++);
        std::vector<int> hits(c.counts.size(), 0);
        for (int k = 0; k < draws; ++k) {
            hits[index.sample(rng)] += 1;
        }
        for (std::size_t i = 0; i < c.counts.size(); ++i) {
            const double p = c.expected[i];
            const double sd = std::sqrt(p * (1.0 - p) * draws);
            CHECK(std::abs(hits[i] - p * draws) <= 5.0 * sd);
        }
    }
}

TEST_CASE("sampling stays exact through increments") {
    // After mutating the structure, frequencies still follow the current ranks.
    RankIndex index(v64({1, 1, 1}), 1.0, TieRankMode::max_rank);
    index.increment(2);
    index.increment(2);
    index.increment(0);
    // counts [2,1,3] -> ranks [2,3,1]; weights [1/2, 1/3, 1] / (11/6).
    const std::vector<double> expected = {3.0 / 11, 2.0 / 11, 6.0 / 11};
    RandomStream rng(202);
    const int draws = 1000000;
    std::vector<int> hits(3, 0);
    for (int k = 0; k < draws; ++k) hits[index.sample(rng)] += 1;
    for (std::size_t i = 0; i < 3; ++i) {
        const double sd = std::sqrt(expected[i] * (1.0 - expected[i]) * draws);
        CHECK(std::abs(hits[i] - expected[i] * draws) <= 5.0 * sd);
    }
}

TEST_CASE("group_count tracks distinct count values") {
    RankIndex index(v64({1, 1, 1, 1}), 1.0, TieRankMode::max_rank);
    CHECK(index.group_count() == 1);
    index.increment(0);
    CHECK(index.group_count() == 2);
    index.increment(1);
    CHECK(index.group_count() == 2);  // {2,2,1,1}
    index.increment(0);
    CHECK(index.group_count() == 3);  // {3,2,1,1}
}

}  // TEST_SUITE
