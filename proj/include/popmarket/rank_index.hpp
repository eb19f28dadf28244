#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "popmarket/params.hpp"

namespace popmarket {

class RandomStream;

// From-scratch ranks for a count vector, O(N log N).
// Ground truth for differential tests against RankIndex.
std::vector<std::int64_t> naive_ranks(std::span<const std::int64_t> counts, TieRankMode mode);

// Live ranking of items by selection count, supporting single-count
// increments and sampling with P(i) proportional to rank(i)^-alpha.
//
// Items are kept in an array ordered by count, descending. Equal counts form
// one contiguous block; a block shares a rank and therefore one sampling
// weight. Per-count tables hold each block's start, size, and cached weight,
// which makes an increment O(1): the item swaps with the first element of
// its block, then either joins the preceding block (count+1) or starts a new
// one. Sampling walks blocks best-rank-first, O(number of blocks). A block's
// rank falls out of its boundaries: with items 0..start-1 ahead of it,
// max_rank = start + size and min_rank = start + 1.
//
// Cached weights are recomputed from scratch every 2^16 increments to bound
// floating-point drift in the running total.
class RankIndex {
public:
    RankIndex() = default;
    RankIndex(std::span<const std::int64_t> counts, double alpha, TieRankMode mode);

    // Moves one item from count c to c+1 and updates blocks, ranks, weights.
    void increment(std::size_t item);

    // Draws an item with probability rank^-alpha / total_weight: first a
    // block by weight, then a uniform member. Consumes one unit draw plus
    // one index draw when the chosen block has more than one member.
    std::size_t sample(RandomStream& rng) const;

    std::int64_t rank_of(std::size_t item) const;
    std::vector<std::int64_t> ranks() const;

    std::size_t size() const noexcept { return counts_.size(); }
    std::size_t group_count() const noexcept { return n_groups_; }
    double total_weight() const noexcept { return total_weight_; }
    std::int64_t count_of(std::size_t item) const { return counts_[item]; }
    const std::vector<std::int64_t>& counts() const noexcept { return counts_; }
    double alpha() const noexcept { return alpha_; }
    TieRankMode tie_rank_mode() const noexcept { return mode_; }

private:
    void ensure_tables(std::int64_t count);
    void init_blocks();
    void recompute_weights();
    double block_weight_for(std::int64_t start, std::int64_t size) const;

    std::vector<std::int64_t> counts_;   // item -> count
    std::vector<std::uint32_t> order_;   // item ids sorted by count, descending
    std::vector<std::uint32_t> pos_;     // item -> position in order_
    // Block tables indexed by count value. Entries for counts no item
    // currently holds are stale and never read.
    std::vector<std::int64_t> block_start_;
    std::vector<std::int64_t> block_size_;
    std::vector<double> block_weight_;
    double alpha_ = 1.0;
    double total_weight_ = 0.0;
    TieRankMode mode_ = TieRankMode::max_rank;
    std::size_t n_groups_ = 0;
    std::uint64_t increments_since_rebuild_ = 0;

    static constexpr std::uint64_t kRebuildInterval = std::uint64_t{1} << 16;
};

}  // namespace popmarket
