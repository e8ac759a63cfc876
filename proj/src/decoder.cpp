#include "stbclab/decoder.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "stbclab/constants.hpp"

namespace stbclab {

RealEquivalent real_equivalent(const CMat& h, const LinearStbc& code, double mu,
                               bool sorted_columns) {
    validate(code);
    if (h.cols() != code.nt)
        throw ConfigError("real_equivalent: channel must have n_t = " + std::to_string(code.nt) +
                          " columns");
    return real_equivalent(h, generator_matrix(code).g, code.t, mu, sorted_columns);
}

RealEquivalent real_equivalent(const CMat& h, const RMat& g, std::size_t t, double mu,
                               bool sorted_columns) {
    if (g.rows() != 2 * t * h.cols())
        throw ConfigError("real_equivalent: generator rows must equal 2 T n_t");
    RMat hbar = kron_identity(t, check_realify(h));
    RealEquivalent eq;
    eq.heq = hbar * (mu * g);

    eq.perm.resize(eq.heq.cols());
    std::iota(eq.perm.begin(), eq.perm.end(), 0);
    if (sorted_columns) {
        std::vector<double> norms(eq.heq.cols(), 0.0);
        for (std::size_t j = 0; j < eq.heq.cols(); ++j)
            for (std::size_t i = 0; i < eq.heq.rows(); ++i)
                norms[j] += eq.heq(i, j) * eq.heq(i, j);
        std::stable_sort(eq.perm.begin(), eq.perm.end(),
                         [&](std::size_t a, std::size_t b) { return norms[a] > norms[b]; });
    }

    if (eq.heq.rows() < eq.heq.cols()) {
        eq.rank_deficient = true;
        return eq;
    }
    RMat permuted(eq.heq.rows(), eq.heq.cols());
    for (std::size_t j = 0; j < eq.heq.cols(); ++j)
        for (std::size_t i = 0; i < eq.heq.rows(); ++i) permuted(i, j) = eq.heq(i, eq.perm[j]);
    try {
        QrResult qr = qr_real(permuted);
        eq.q = std::move(qr.q);
        eq.rfac = std::move(qr.r);
    } catch (const RankDeficientError&) {
        eq.rank_deficient = true;
    }
    return eq;
}

DecodeResult ml_exhaustive(std::span<const double> y, const RealEquivalent& eq,
                           const std::vector<std::vector<double>>& sets, std::uint64_t cap) {
    if (y.size() != eq.heq.rows()) throw ConfigError("ml_exhaustive: observation length mismatch");
    if (sets.size() != eq.heq.cols())
        throw ConfigError("ml_exhaustive: need one symbol set per column");

    DecodeResult best;
    best.metric = std::numeric_limits<double>::infinity();
    for_each_vector(sets, cap, [&](const std::vector<double>& s) {
        double metric = 0;
        for (std::size_t i = 0; i < eq.heq.rows(); ++i) {
            double acc = y[i];
            for (std::size_t j = 0; j < eq.heq.cols(); ++j) acc -= eq.heq(i, j) * s[j];
            metric += acc * acc;
        }
        ++best.nodes_visited;
        // lexicographic enumeration + strict < keeps the lex-smallest tie
        if (metric < best.metric) {
            best.metric = metric;
            best.s_hat = s;
        }
    });
    return best;
}

DecodeResult sphere_decode(std::span<const double> y, const RealEquivalent& eq,
                           const std::vector<std::vector<double>>& sets) {
    if (eq.rank_deficient)
        throw RankDeficientError(
            "sphere_decode: equivalent channel is rank deficient; use ml_exhaustive");
    if (y.size() != eq.heq.rows()) throw ConfigError("sphere_decode: observation length mismatch");
    const std::size_t n = eq.heq.cols();
    if (sets.size() != n) throw ConfigError("sphere_decode: need one symbol set per column");

    // Candidate sets in factorization order, each sorted ascending.
    std::vector<std::vector<double>> s_sets(n);
    for (std::size_t j = 0; j < n; ++j) {
        s_sets[j] = sets[eq.perm[j]];
        if (s_sets[j].empty()) throw ConfigError("sphere_decode: empty symbol set");
        std::sort(s_sets[j].begin(), s_sets[j].end());
    }

    // y' = Q^T y; the part of y outside the column span is a constant
    // offset added back to every leaf metric.
    std::vector<double> yp(n, 0.0);
    for (std::size_t j = 0; j < n; ++j)
        for (std::size_t i = 0; i < y.size(); ++i) yp[j] += eq.q(i, j) * y[i];
    double resid = 0;
    for (std::size_t i = 0; i < y.size(); ++i) {
        double proj = 0;
        for (std::size_t j = 0; j < n; ++j) proj += eq.q(i, j) * yp[j];
        const double d = y[i] - proj;
        resid += d * d;
    }

    struct Level {
        double center = 0;    // unconstrained solution for this coordinate
        double partial = 0;   // accumulated squared residual of levels above
        std::size_t lo = 0, hi = 0;  // zig-zag cursors into the sorted set
        bool lo_valid = false, hi_valid = false;
    };
    std::vector<Level> lv(n);
    std::vector<double> s(n, 0.0);

    auto enter_level = [&](std::size_t i, double partial) {
        double acc = yp[i];
        for (std::size_t j = i + 1; j < n; ++j) acc -= eq.rfac(i, j) * s[j];
        Level& L = lv[i];
        L.center = acc / eq.rfac(i, i);
        L.partial = partial;
        const auto& set = s_sets[i];
        std::size_t pos = std::lower_bound(set.begin(), set.end(), L.center) - set.begin();
        L.hi = pos;
        L.hi_valid = pos < set.size();
        L.lo = pos > 0 ? pos - 1 : 0;
        L.lo_valid = pos > 0;
    };

    // Next candidate by distance from the center; returns false when the
    // level is exhausted.
    auto next_candidate = [&](std::size_t i, double& value) {
        Level& L = lv[i];
        const auto& set = s_sets[i];
        if (!L.lo_valid && !L.hi_valid) return false;
        bool take_hi;
        if (!L.lo_valid) take_hi = true;
        else if (!L.hi_valid) take_hi = false;
        else take_hi = std::abs(set[L.hi] - L.center) <= std::abs(set[L.lo] - L.center);
        if (take_hi) {
            value = set[L.hi];
            if (++L.hi >= set.size()) L.hi_valid = false;
        } else {
            value = set[L.lo];
            if (L.lo == 0) L.lo_valid = false;
            else --L.lo;
        }
        return true;
    };

    DecodeResult best;
    best.metric = std::numeric_limits<double>::infinity();
    double best_tree = std::numeric_limits<double>::infinity();  // metric without resid
    std::vector<double> best_s;

    std::size_t i = n - 1;
    enter_level(i, 0.0);
    for (;;) {
        double v;
        bool have = next_candidate(i, v);
        if (have) {
            const double e = eq.rfac(i, i) * (lv[i].center - v);
            const double d = lv[i].partial + e * e;
            ++best.nodes_visited;
            if (d > best_tree) {
                // candidates only get farther from the center: close level
                lv[i].lo_valid = lv[i].hi_valid = false;
                have = false;
            } else {
                s[i] = v;
                if (i == 0) {
                    if (d < best_tree ||
                        (d == best_tree && std::lexicographical_compare(s.begin(), s.end(),
                                                                        best_s.begin(),
                                                                        best_s.end()))) {
                        best_tree = std::min(best_tree, d);
                        best_s = s;
                    }
                } else {
                    enter_level(--i, d);
                    continue;
                }
            }
        }
        if (!have) {
            if (++i >= n) break;  // root exhausted
        }
    }

    if (best_s.empty()) throw NumericalError("sphere_decode: empty search tree");
    best.metric = best_tree + resid;
    best.s_hat.resize(n);
    for (std::size_t j = 0; j < n; ++j) best.s_hat[eq.perm[j]] = best_s[j];
    return best;
}

}  // namespace stbclab
