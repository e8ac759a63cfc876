#include "stbclab/nvd.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>

#include "stbclab/constants.hpp"
#include "stbclab/parallel.hpp"
#include "stbclab/simulator.hpp"

namespace stbclab {

namespace {

// Sparse view of one weight matrix; the built-in designs are mostly zeros.
struct SparseWeight {
    std::vector<std::pair<std::size_t, cplx>> entries;  // (flat index, value)
};

std::vector<SparseWeight> sparsify(const LinearStbc& code) {
    std::vector<SparseWeight> out(code.weights.size());
    for (std::size_t w = 0; w < code.weights.size(); ++w) {
        const auto e = code.weights[w].entries();
        for (std::size_t i = 0; i < e.size(); ++i)
            if (e[i] != 0.0) out[w].entries.emplace_back(i, e[i]);
    }
    return out;
}

double gram_det(const LinearStbc& code, const std::vector<SparseWeight>& sw,
                std::span<const double> s) {
    CMat x(code.nt, code.t);
    auto xe = x.entries();
    for (std::size_t i = 0; i < s.size(); ++i) {
        const double c = s[i];
        if (c == 0.0) continue;
        for (const auto& [idx, val] : sw[i].entries) xe[idx] += c * val;
    }
    CMat g = x * x.hermitian();
    double d = det_c(std::move(g)).real();
    return d < 0 && d > -tol::mindet_zero ? 0.0 : d;
}

struct SearchBest {
    double value = std::numeric_limits<double>::infinity();
    std::vector<double> argmin;
    std::uint64_t evaluated = 0;

    void consider(double v, const std::vector<double>& s) {
        ++evaluated;
        if (v < value || (v == value && std::lexicographical_compare(s.begin(), s.end(),
                                                                     argmin.begin(), argmin.end()))) {
            value = v;
            argmin = s;
        }
    }
    void merge(const SearchBest& o) {
        evaluated += o.evaluated;
        if (o.argmin.empty()) return;
        if (o.value < value || (o.value == value &&
                                std::lexicographical_compare(o.argmin.begin(), o.argmin.end(),
                                                             argmin.begin(), argmin.end()))) {
            value = o.value;
            argmin = o.argmin;
        }
    }
};

// Enumerates every nonzero vector up to global sign: the first nonzero
// coordinate is restricted to positive values. Partitioned into seekable
// stripes so workers split the space exactly.
SearchBest search_half_space(const LinearStbc& code,
                             const std::vector<std::vector<double>>& sets, unsigned workers) {
    const std::vector<SparseWeight> sw = sparsify(code);
    const std::size_t n = sets.size();

    struct Stripe {
        std::size_t first_coord;
        double first_value;
        std::uint64_t suffix_total;
    };
    std::vector<Stripe> stripes;
    for (std::size_t f = 0; f < n; ++f) {
        std::uint64_t suffix = 1;
        for (std::size_t j = f + 1; j < n; ++j) suffix *= sets[j].size();
        for (double v : sets[f])
            if (v > 0) stripes.push_back({f, v, suffix});
    }

    std::vector<SearchBest> results(stripes.size());
    std::mutex next_mutex;
    std::size_t next_stripe = 0;

    auto run_stripe = [&](std::size_t si) {
        const Stripe& st = stripes[si];
        SearchBest best;
        std::vector<double> s(n, 0.0);
        s[st.first_coord] = st.first_value;
        const std::size_t tail = st.first_coord + 1;
        if (tail >= n) {
            best.consider(gram_det(code, sw, s), s);
        } else {
            std::vector<std::size_t> radices;
            for (std::size_t j = tail; j < n; ++j) radices.push_back(sets[j].size());
            MixedRadix odo(radices);
            for (std::uint64_t c = 0; c < st.suffix_total; ++c) {
                const auto& d = odo.digits();
                for (std::size_t j = tail; j < n; ++j) s[j] = sets[j][d[j - tail]];
                best.consider(gram_det(code, sw, s), s);
                odo.next();
            }
        }
        results[si] = std::move(best);
    };

    // Stripes are uneven (early coordinates carry almost all the work), so
    // hand them out dynamically; the merge below is order-independent.
    parallel_for(std::min<std::size_t>(stripes.size(), workers), workers,
                 [&](std::size_t, std::size_t) {
                     for (;;) {
                         std::size_t si;
                         {
                             std::lock_guard lk(next_mutex);
                             if (next_stripe >= stripes.size()) return;
                             si = next_stripe++;
                         }
                         run_stripe(si);
                     }
                 });

    SearchBest total;
    for (const SearchBest& b : results) total.merge(b);
    return total;
}

MinDetReport finish_report(const LinearStbc& code, SearchBest best) {
    MinDetReport rep;
    rep.code = code.name;
    if (best.argmin.empty()) {
        rep.value = 0.0;
        rep.evaluated = best.evaluated;
        return rep;
    }
    rep.value = best.value <= tol::mindet_zero ? (best.value < 0 ? 0.0 : best.value) : best.value;
    rep.argmin = std::move(best.argmin);
    rep.evaluated = best.evaluated;
    return rep;
}

}  // namespace

MinDetReport min_det_code(const LinearStbc& code, int m, std::uint64_t cap, unsigned workers) {
    validate(code);
    if (m < 1) throw ConfigError("min_det_code: M must be >= 1");
    // difference set of M-PAM: even integers in [-2(M-1), 2(M-1)]
    std::vector<double> diffs;
    for (int d = -2 * (m - 1); d <= 2 * (m - 1); d += 2) diffs.push_back(d);
    if (diffs.size() == 1)
        throw ConfigError("min_det_code: M = 1 has no nonzero differences");
    std::vector<std::vector<double>> sets(2 * code.k, diffs);
    bool over = false;
    std::uint64_t count = 1;
    for (const auto& s : sets) {
        if (count > (2 * cap) / s.size() + 1) {
            over = true;
            break;
        }
        count *= s.size();
    }
    if (over || (count - 1) / 2 > cap)
        throw CapExceededError(
            "min_det_code: difference space of (2M-1)^(2k) vectors exceeds cap " +
            std::to_string(cap) + "; consider min_det_z with a small bound");
    SearchBest best = search_half_space(code, sets, workers);
    MinDetReport rep = finish_report(code, std::move(best));
    rep.constellation_m = m;
    rep.exhaustive = true;
    return rep;
}

MinDetReport min_det_z(const LinearStbc& code, int b, std::uint64_t cap, unsigned workers,
                       std::uint64_t randomized_trials, std::uint64_t seed) {
    validate(code);
    if (b < 1) throw ConfigError("min_det_z: bound must be >= 1");
    std::vector<double> box;
    for (int v = -b; v <= b; ++v) box.push_back(v);
    std::vector<std::vector<double>> sets(2 * code.k, box);

    bool over_cap = false;
    std::uint64_t count = 1;
    for (const auto& s : sets) {
        count *= s.size();
        if (count > 2 * cap) {
            over_cap = true;
            break;
        }
    }
    if (over_cap && randomized_trials == 0)
        throw CapExceededError("min_det_z: box of (2B+1)^(2k) vectors exceeds cap " +
                               std::to_string(cap) +
                               "; pass a randomized trial budget to sample instead");

    MinDetReport rep;
    if (!over_cap && randomized_trials == 0) {
        SearchBest best = search_half_space(code, sets, workers);
        rep = finish_report(code, std::move(best));
    } else {
        Rng rng(seed);
        SearchBest best;
        std::vector<double> s(2 * code.k);
        const std::vector<SparseWeight> sw = sparsify(code);
        for (std::uint64_t t = 0; t < randomized_trials; ++t) {
            bool nonzero = false;
            for (double& v : s) {
                v = static_cast<double>(rng.uniform_int(2 * b + 1) - b);
                nonzero |= v != 0.0;
            }
            if (!nonzero) continue;
            best.consider(gram_det(code, sw, s), s);
        }
        rep = finish_report(code, std::move(best));
    }
    rep.search_bound = b;
    // A box search never certifies the whole integer design.
    rep.exhaustive = false;
    return rep;
}

std::string to_string(Criterion c) {
    return c == Criterion::enhanced ? "enhanced" : "baseline";
}

Criterion criterion_from_string(const std::string& s) {
    if (s == "enhanced") return Criterion::enhanced;
    if (s == "baseline") return Criterion::baseline;
    throw ConfigError("unknown criterion '" + s + "' (expected enhanced or baseline)");
}

CriterionVerdict criterion_check(const SchemeConfig& cfg, int nr, Criterion which,
                                 const MinDetReport& c0_report) {
    if (nr < 1) throw ConfigError("criterion_check: n_r must be >= 1");
    CriterionVerdict v;
    v.code = cfg.code.name;
    v.nr = nr;
    v.r = cfg.r;
    v.which = which;
    const double nt = static_cast<double>(cfg.code.nt);
    const double nmin = std::min(nt, static_cast<double>(nr));
    const double denom = which == Criterion::enhanced ? nmin : nt;
    v.required_exponent = nt * (1.0 - cfg.r / denom);

    const double c0 = c0_report.value;
    if (c0 <= tol::mindet_zero) {
        v.pass = false;
        v.note = "design minimum determinant is zero; witness difference recorded in the report";
        return v;
    }

    // Exponent of mu^{2 nt} c0 at each grid SNR, then the slope of
    // log(mu^{2 nt} c0) against log SNR over the top half of the grid.
    std::vector<double> xs, ys;
    for (double db : cfg.snr_grid_db) {
        const double snr = db_to_linear(db);
        const double mu = cfg.mu_at(snr);
        const double logval = 2.0 * nt * std::log(mu) + std::log(c0);
        v.measured_exponents.emplace_back(db, logval / std::log(snr));
        xs.push_back(std::log(snr));
        ys.push_back(logval);
    }
    const std::size_t n = xs.size();
    if (n < 2) throw ConfigError("criterion_check: need at least 2 SNR grid points");
    const std::size_t start = n / 2;
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double m = static_cast<double>(n - start);
    for (std::size_t i = start; i < n; ++i) {
        sx += xs[i];
        sy += ys[i];
        sxx += xs[i] * xs[i];
        sxy += xs[i] * ys[i];
    }
    const double denom_ls = m * sxx - sx * sx;
    if (denom_ls <= 0) throw ConfigError("criterion_check: SNR grid points must be distinct");
    v.slope = (m * sxy - sx * sy) / denom_ls;
    v.pass = v.slope >= v.required_exponent - tol::criterion_eps;
    return v;
}

}  // namespace stbclab
