#include "popmarket/rank_index.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <numeric>

#include "popmarket/rng.hpp"

namespace popmarket {

std::vector<std::int64_t> naive_ranks(std::span<const std::int64_t> counts, TieRankMode mode) {
    if (counts.empty()) throw InvalidInputError("counts must be non-empty");
    const std::size_t n = counts.size();
    std::vector<std::uint32_t> idx(n);
    std::iota(idx.begin(), idx.end(), 0u);
    std::sort(idx.begin(), idx.end(), [&](std::uint32_t a, std::uint32_t b) {
        return counts[a] != counts[b] ? counts[a] > counts[b] : a < b;
    });
    std::vector<std::int64_t> ranks(n);
    std::size_t s = 0;
    while (s < n) {
        if (counts[idx[s]] < 1) throw InvalidInputError("counts must be >= 1");
        std::size_t e = s + 1;
        while (e < n && counts[idx[e]] == counts[idx[s]]) ++e;
        const std::int64_t rank = mode == TieRankMode::max_rank
                                      ? static_cast<std::int64_t>(e)
                                      : static_cast<std::int64_t>(s) + 1;
        for (std::size_t i = s; i < e; ++i) ranks[idx[i]] = rank;
        s = e;
    }
    return ranks;
}

RankIndex::RankIndex(std::span<const std::int64_t> counts, double alpha, TieRankMode mode)
    : counts_(counts.begin(), counts.end()), alpha_(alpha), mode_(mode) {
    if (counts_.empty()) throw InvalidInputError("counts must be non-empty");
    if (!(alpha >= 0.0) || !std::isfinite(alpha))
        throw InvalidInputError("alpha must be finite and >= 0");
    for (const std::int64_t c : counts_)
        if (c < 1) throw InvalidInputError("counts must be >= 1");

    const std::size_t n = counts_.size();
    order_.resize(n);
    pos_.resize(n);
    std::iota(order_.begin(), order_.end(), 0u);
    std::sort(order_.begin(), order_.end(), [&](std::uint32_t a, std::uint32_t b) {
        return counts_[a] != counts_[b] ? counts_[a] > counts_[b] : a < b;
    });
    for (std::size_t i = 0; i < n; ++i) pos_[order_[i]] = static_cast<std::uint32_t>(i);

    const std::int64_t cmax = *std::max_element(counts_.begin(), counts_.end());
    block_start_.assign(static_cast<std::size_t>(cmax) + 2, 0);
    block_size_.assign(static_cast<std::size_t>(cmax) + 2, 0);
    block_weight_.assign(static_cast<std::size_t>(cmax) + 2, 0.0);
    init_blocks();
    recompute_weights();
}

void RankIndex::ensure_tables(std::int64_t count) {
    const auto needed = static_cast<std::size_t>(count) + 1;
    if (needed <= block_start_.size()) return;
    const std::size_t grown = std::max(needed, block_start_.size() * 2);
    block_start_.resize(grown, 0);
    block_size_.resize(grown, 0);
    block_weight_.resize(grown, 0.0);
}

void RankIndex::init_blocks() {
    const auto n = static_cast<std::int64_t>(order_.size());
    std::int64_t s = 0;
    while (s < n) {
        const std::int64_t c = counts_[order_[s]];
        std::int64_t e = s + 1;
        while (e < n && counts_[order_[e]] == c) ++e;
        block_start_[c] = s;
        block_size_[c] = e - s;
        s = e;
    }
}

double RankIndex::block_weight_for(std::int64_t start, std::int64_t size) const {
    const std::int64_t rank = mode_ == TieRankMode::max_rank ? start + size : start + 1;
    return static_cast<double>(size) * std::pow(static_cast<double>(rank), -alpha_);
}

void RankIndex::recompute_weights() {
    const auto n = static_cast<std::int64_t>(order_.size());
    double total = 0.0;
    std::size_t groups = 0;
    std::int64_t s = 0;
    while (s < n) {
        const std::int64_t c = counts_[order_[s]];
        const std::int64_t sz = block_size_[c];
        assert(block_start_[c] == s && sz >= 1);
        block_weight_[c] = block_weight_for(s, sz);
        total += block_weight_[c];
        ++groups;
        s += sz;
    }
    total_weight_ = total;
    n_groups_ = groups;
    increments_since_rebuild_ = 0;
}

void RankIndex::increment(std::size_t item) {
    if (item >= counts_.size()) throw InvalidInputError("item index out of range");
    const std::int64_t c = counts_[item];
    const std::int64_t s = block_start_[c];
    const std::int64_t old_size = block_size_[c];
    assert(s >= 0 && old_size >= 1);
    assert(counts_[order_[s]] == c);  // block tables in sync with counts

    // Swap the item to the head of its block; order_ stays sorted.
    const std::uint32_t head = order_[s];
    const std::uint32_t p = pos_[item];
    order_[p] = head;
    pos_[head] = p;
    order_[s] = static_cast<std::uint32_t>(item);
    pos_[item] = static_cast<std::uint32_t>(s);

    ensure_tables(c + 1);
    total_weight_ -= block_weight_[c];

    // Shrink the old block; its max-style rank (end position) is unchanged.
    block_start_[c] = s + 1;
    block_size_[c] = old_size - 1;

    // Join the (c+1)-block ending at position s, or start a new one there.
    const bool join = s > 0 && counts_[order_[s - 1]] == c + 1;
    if (join) {
        total_weight_ -= block_weight_[c + 1];
        block_size_[c + 1] += 1;
    } else {
        block_start_[c + 1] = s;
        block_size_[c + 1] = 1;
        ++n_groups_;
    }
    counts_[item] = c + 1;

    block_weight_[c + 1] = block_weight_for(block_start_[c + 1], block_size_[c + 1]);
    total_weight_ += block_weight_[c + 1];
    if (block_size_[c] > 0) {
        block_weight_[c] = block_weight_for(block_start_[c], block_size_[c]);
        total_weight_ += block_weight_[c];
    } else {
        --n_groups_;
    }

    if (++increments_since_rebuild_ >= kRebuildInterval) recompute_weights();
}

std::size_t RankIndex::sample(RandomStream& rng) const {
    assert(!order_.empty());
    const double u = rng.next_unit() * total_weight_;
    const auto n = static_cast<std::int64_t>(order_.size());
    double acc = 0.0;
    std::int64_t start = 0;
    std::int64_t sz = 0;
    std::int64_t pos = 0;
    while (pos < n) {
        const std::int64_t c = counts_[order_[pos]];
        start = pos;
        sz = block_size_[c];
        assert(sz >= 1);
        acc += block_weight_[c];
        pos += sz;
        if (u < acc) break;
    }
    // Rounding slack can walk past the end; the last block then absorbs it.
    const std::uint64_t offset = rng.next_index(static_cast<std::uint64_t>(sz));
    return order_[start + static_cast<std::int64_t>(offset)];
}

std::int64_t RankIndex::rank_of(std::size_t item) const {
    const std::int64_t c = counts_[item];
    return mode_ == TieRankMode::max_rank ? block_start_[c] + block_size_[c]
                                          : block_start_[c] + 1;
}

std::vector<std::int64_t> RankIndex::ranks() const {
    const auto n = static_cast<std::int64_t>(order_.size());
    std::vector<std::int64_t> out(order_.size());
    std::int64_t s = 0;
    while (s < n) {
        const std::int64_t c = counts_[order_[s]];
        const std::int64_t sz = block_size_[c];
        const std::int64_t rank = mode_ == TieRankMode::max_rank ? s + sz : s + 1;
        for (std::int64_t i = s; i < s + sz; ++i) out[order_[i]] = rank;
        s += sz;
    }
    return out;
}

}  // namespace popmarket
