#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "stbclab/decoder.hpp"
#include "stbclab/stbc.hpp"

namespace stbclab {

// Counter-based deterministic generator (splitmix64 core). Every Monte-Carlo
// trial gets its own stream derived from (seed, stream, trial), so results
// do not depend on worker scheduling.
class Rng {
public:
    explicit Rng(std::uint64_t seed);
    static Rng for_trial(std::uint64_t seed, std::uint64_t stream, std::uint64_t trial);

    std::uint64_t next_u64();
    double uniform01();               // [0, 1)
    double gauss();                   // N(0, 1), Box-Muller
    int uniform_int(int n);           // [0, n)
    cplx cgauss();                    // CN(0, 1)

private:
    std::uint64_t state_;
    double cached_ = 0.0;
    bool has_cached_ = false;
};

// Entries i.i.d. circularly symmetric complex Gaussian, unit variance.
CMat sample_channel(std::size_t nr, std::size_t nt, Rng& rng);
CMat sample_noise(std::size_t nr, std::size_t t, Rng& rng);
// Haar-style random unitary from Householder QR of a Gaussian matrix.
CMat random_unitary(std::size_t n, Rng& rng);

struct WilsonInterval {
    double lo = 0.0, hi = 0.0;
};
WilsonInterval wilson_interval(std::uint64_t successes, std::uint64_t trials,
                               double z = 1.959963984540054);

struct SlopeFit {
    double slope = 0.0;
    double stderr_ = 0.0;
    std::size_t points_used = 0;
};

// Least-squares slope of -log10(p) against log10(SNR) over the top
// `window_fraction` of the grid; needs >= 3 nonzero-probability points.
SlopeFit dmt_slope(const std::vector<std::pair<double, double>>& snr_db_p, double window_fraction);

enum class DecoderChoice { sphere, exhaustive };

struct SimJob {
    SchemeConfig scheme;
    int nr = 1;
    std::uint64_t max_trials = 100000;
    std::uint64_t target_errors = 200;  // 0 disables early stopping
    std::uint64_t seed = 1;
    DecoderChoice decoder = DecoderChoice::sphere;
    unsigned workers = 1;
    double noise_scale = 1.0;  // test hook; 0 gives a noiseless channel
    double slope_window = 1.0;
};

struct PointStats {
    double snr_db = 0.0;
    std::uint64_t trials = 0;
    std::uint64_t errors = 0;
    double pe = 0.0;
    double ci_lo = 0.0, ci_hi = 0.0;
    std::uint64_t decoder_fallbacks = 0;  // sphere requested, exhaustive used
};

struct SimStats {
    std::vector<PointStats> points;
    std::optional<SlopeFit> slope;
};

// Codeword (block) error probability over the quasi-static channel:
// draw H and a uniform codeword per trial, add unit-variance noise, decode.
SimStats error_probability(const SimJob& job);

// log2 det(I + (SNR/nt) H H^H)
double mutual_info_bits(const CMat& h, double snr, std::size_t nt);

struct OutageJob {
    std::size_t nt = 2, nr = 2;
    double r = 0.0;                 // rate schedule R = r log2 SNR + offset
    double rate_offset_bits = 1.0;  // keeps the r = 0 target strictly positive
    std::vector<double> snr_grid_db;
    std::uint64_t trials = 100000;
    std::uint64_t seed = 1;
    bool importance = false;  // variance-scaled sampling for deep tails
    unsigned workers = 1;
    double slope_window = 1.0;
};

struct OutagePoint {
    double snr_db = 0.0;
    std::uint64_t trials = 0;
    double rate_bits = 0.0;
    double p = 0.0;
    double ci_lo = 0.0, ci_hi = 0.0;
};

struct OutageResult {
    std::vector<OutagePoint> points;
    std::optional<SlopeFit> slope;
    bool importance = false;
};

OutageResult outage_probability(const OutageJob& job);

// Closed form for the 1x1 channel: P(log2(1 + SNR |h|^2) <= R).
double siso_outage_closed_form(double snr, double rate_bits);

struct CapacityCheck {
    double lhs = 0.0;      // Monte-Carlo (1/2T) E log2 det(I + Hbar G Q G^T Hbar^T)
    double rhs = 0.0;      // (1/2T) sum log2(1 + alpha nr d_i SNR) over nonzero eigs of G^T G
    double stderr_ = 0.0;  // of the lhs estimate
    std::size_t rhs_terms = 0;
    bool pass = false;     // lhs <= rhs + 3 stderr
};

CapacityCheck capacity_bound_check(const LinearStbc& code, int nr, double alpha, double snr,
                                   std::uint64_t mc_trials, std::uint64_t seed,
                                   unsigned workers = 1);

// Fraction of channel draws whose membership in
// { sum_ij log(1 + SNR |h_ij|^2) > nt r log SNR } agrees between H and H U
// for a random unitary U, per grid SNR.
std::vector<double> unitary_outage_agreement(std::size_t nt, std::size_t nr, double r,
                                             const std::vector<double>& snr_grid_db,
                                             std::uint64_t trials, std::uint64_t seed);

}  // namespace stbclab
