#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "stbclab/linalg.hpp"

namespace stbclab {

// Optimal diversity-multiplexing tradeoff: piecewise-linear through the
// vertices (k, (nt - k)(nr - k)), k = 0..min(nt, nr).
struct DmtCurve {
    int nt = 0, nr = 0;
    std::vector<std::pair<int, int>> vertices;
    double eval(double r) const;  // linear interpolation; r in [0, n_min]
};

DmtCurve optimal_dmt(int nt, int nr);

// Convex program: minimize sum_ij a_ij d_j^2 over a >= 0 subject to
// (1/nt) sum_ij log(1 + a_ij SNR) >= (r + delta) log SNR.
struct KktProblem {
    int nt = 0, nr = 0;
    std::vector<double> d_sq;  // nt positive values, sorted descending
    double snr = 0.0;
    double r = 0.0;
    double delta = 0.0;  // nonnegative; r + delta > 0 for a nontrivial program
};

struct KktSolution {
    double lambda = 0.0;
    RMat a;  // nr x nt, identical rows
    double objective = 0.0;
    double constraint_residual = 0.0;
};

// Water-filling closed form a_ij = (1/SNR)[lambda SNR / (nt d_j^2) - 1]^+
// with the multiplier found by bisection on the monotone constraint.
KktSolution kkt_waterfill(const KktProblem& p);

struct KktCrossCheck {
    double objective_kkt = 0.0;
    double objective_pg = 0.0;  // projected-gradient descent, best restart
    double gap = 0.0;           // |kkt - pg| / kkt
    bool converged = false;
};

// Independent check: projected gradient on the same program in the
// variables t_ij = log(1 + a_ij SNR), whose feasible set is a half-space
// intersected with the positive orthant.
KktCrossCheck kkt_crosscheck(const KktProblem& p, int restarts = 8, std::uint64_t seed = 1,
                             unsigned workers = 1);

struct NearOutageExponent {
    double infimum = 0.0;      // eta -> 0 extrapolation
    double closed_form = 0.0;  // nt (nr - r)
    std::vector<std::pair<double, double>> per_eta;  // (eta, constrained infimum)
    RMat alpha;                // minimizer at the smallest eta
    bool matches_closed_form = false;  // within 2 percent
};

// Decay exponent of the probability that the channel sits between the
// row-sum and entry-sum rate events: numerically minimizes sum alpha_ij
// over alpha >= 0 subject to
//   sum_i max_j (1 - alpha_ij)^+  >  r      (relaxed to >= r + eta)
//   sum_ij (1 - alpha_ij)^+      <=  nt r   (relaxed to <= nt (r + eta))
// for a decreasing eta sequence, then extrapolates eta -> 0.
NearOutageExponent near_outage_exponent(int nt, int nr, double r, int starts = 64,
                                        std::uint64_t seed = 1);

// Gaussian tail Q(x); the bound Q(x) <= exp(-x^2/2)/2 is exercised in tests.
double q_function(double x);

}  // namespace stbclab
