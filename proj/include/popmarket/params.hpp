#pragma once

#include <cmath>

#include "popmarket/errors.hpp"

namespace popmarket {

// Which rank a tie group shares.
//   max_rank: rank of an item = number of items selected at least as many
//             times (counts [5,5,3] -> ranks [2,2,3])
//   min_rank: standard competition ranking; after a k-way tie at rank r the
//             next rank is r + k (counts [5,5,3] -> ranks [1,1,3])
enum class TieRankMode { max_rank, min_rank };

enum class TauVariant { tau_b, tau_a };

// Parameters governing one market's dynamics.
struct ModelParams {
    double alpha = 1.0;  // rank-power exponent, >= 0; 0 makes popularity picks uniform
    double beta = 0.4;   // probability of a popularity-based selection, in [0, 1]
    int n_items = 100;   // >= 2
    TieRankMode tie_rank_mode = TieRankMode::max_rank;

    void validate() const {
        if (!(alpha >= 0.0) || !std::isfinite(alpha))
            throw InvalidInputError("alpha must be finite and >= 0");
        if (!(beta >= 0.0 && beta <= 1.0))
            throw InvalidInputError("beta must lie in [0, 1]");
        if (n_items < 2)
            throw InvalidInputError("n_items must be >= 2");
    }
};

}  // namespace popmarket
