#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "stbclab/stbc.hpp"

namespace stbclab {

inline constexpr std::uint64_t kDefaultSearchCap = 1ull << 24;

struct MinDetReport {
    std::string code;
    double value = 0.0;              // min over nonzero vectors of det(X X^H)
    std::vector<double> argmin;      // attaining vector (length 2k)
    int constellation_m = 0;         // set for code-difference searches
    int search_bound = 0;            // set for integer-box searches
    bool exhaustive = true;          // false for randomized/box-certificate results
    std::uint64_t evaluated = 0;
};

// Exact minimum of det(dX dX^H) over nonzero differences of the level-M
// code. Differences of M-PAM are the even integers in [-2(M-1), 2(M-1)];
// the +/- symmetry halves the search.
MinDetReport min_det_code(const LinearStbc& code, int m, std::uint64_t cap = kDefaultSearchCap,
                          unsigned workers = 1);

// Minimum of det(X X^H) over nonzero integer vectors with |coordinate| <= b.
// This is a certificate over the box, not over the full integer lattice.
// With randomized_trials > 0 an over-cap box is sampled instead.
MinDetReport min_det_z(const LinearStbc& code, int b, std::uint64_t cap = kDefaultSearchCap,
                       unsigned workers = 1, std::uint64_t randomized_trials = 0,
                       std::uint64_t seed = 1);

// Two determinant-exponent sufficiency tests: the baseline one normalizes
// the multiplexing gain by n_t, the enhanced one by n_min = min(n_t, n_r).
enum class Criterion { baseline, enhanced };

std::string to_string(Criterion c);
Criterion criterion_from_string(const std::string& s);

struct CriterionVerdict {
    std::string code;
    int nr = 0;
    double r = 0.0;
    Criterion which = Criterion::enhanced;
    double required_exponent = 0.0;
    // per grid point: (snr_db, exponent of mu^{2 nt} c0 at that SNR)
    std::vector<std::pair<double, double>> measured_exponents;
    double slope = 0.0;  // least-squares exponent over the top half of the grid
    bool pass = false;
    std::string note;    // witness when the design has a vanishing determinant
};

// c0_report: minimum determinant of the unnormalized design (from
// min_det_code or min_det_z). A zero value fails immediately.
CriterionVerdict criterion_check(const SchemeConfig& cfg, int nr, Criterion which,
                                 const MinDetReport& c0_report);

}  // namespace stbclab
