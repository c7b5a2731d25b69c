#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "lastrec/rng.hpp"

namespace lastrec {

/// [0,1]^d with Lebesgue measure and the componentwise strict order.
struct CubeSpace {
  int d;
};

/// Intervals ]a,b[ of [0,1] ordered by strict inclusion, with measure density
/// alpha (alpha-1) (b-a)^{alpha-2} da db; the weight of an interval is
/// (b-a)^alpha.
struct IntervalOrderSpace {
  double alpha;  // > 1
};

using ChainSpace = std::variant<CubeSpace, IntervalOrderSpace>;

/// Parses "cube:<d>" or "interval:<alpha>".
ChainSpace parse_chain_space(std::string_view spec);
std::string describe(const ChainSpace& space);

/// Draws n_samples marks i.i.d. from the space and extracts the chain records
/// by the greedy rule (a mark joins the chain iff it is strictly below the
/// current last chain record). Returns the weight sequence of the chain.
std::vector<double> sample_chain_records(const ChainSpace& space, std::int64_t n_samples,
                                         RngStream& rng);

/// Successive chain-record weight ratios pooled over independent batches of
/// batch_size marks each, until n_ratios ratios are collected. Each ratio is
/// an exact draw from the factor law of the space.
std::vector<double> chain_record_ratios(const ChainSpace& space, std::int64_t n_ratios,
                                        std::int64_t batch_size, std::uint64_t seed);

}  // namespace lastrec
