#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "stbclab/stbc.hpp"

namespace stbclab {

// Real-valued equivalent channel of one fading realization:
// vec(Y)~ = Heq s + vec(N)~ with Heq = (I_T (x) Hcheck) G mu.
struct RealEquivalent {
    RMat heq;                       // 2 T nr x 2k
    RMat q;                         // thin QR factors of heq (valid if full rank)
    RMat rfac;
    std::vector<std::size_t> perm;  // column order used by the factorization
    bool rank_deficient = false;
};

// sorted_columns: factor columns in descending-norm order (a decoding-speed
// heuristic); the default natural order keeps node counts reproducible
// across codes.
RealEquivalent real_equivalent(const CMat& h, const LinearStbc& code, double mu,
                               bool sorted_columns = false);

// Same, with the generator precomputed (the per-trial path in simulations).
RealEquivalent real_equivalent(const CMat& h, const RMat& g, std::size_t t, double mu,
                               bool sorted_columns = false);

struct DecodeResult {
    std::vector<double> s_hat;
    double metric = 0.0;            // squared Euclidean distance ||y - Heq s||^2
    std::uint64_t nodes_visited = 0;
};

// Global minimizer by full enumeration; ties go to the lexicographically
// smaller symbol vector.
DecodeResult ml_exhaustive(std::span<const double> y, const RealEquivalent& eq,
                           const std::vector<std::vector<double>>& sets,
                           std::uint64_t cap = 1ull << 20);

// Depth-first search with per-level candidates ordered by distance from the
// unconstrained center and radius shrinking at each leaf. Exact ML: returns
// the same minimizer and metric as ml_exhaustive.
DecodeResult sphere_decode(std::span<const double> y, const RealEquivalent& eq,
                           const std::vector<std::vector<double>>& sets);

}  // namespace stbclab
