#include "stbclab/dmt.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "stbclab/constants.hpp"
#include "stbclab/parallel.hpp"
#include "stbclab/simulator.hpp"

namespace stbclab {

double DmtCurve::eval(double r) const {
    const int nmin = std::min(nt, nr);
    if (r < 0.0 || r > static_cast<double>(nmin))
        throw ConfigError("dmt curve: r must lie in [0, n_min]");
    const int k = std::min(static_cast<int>(std::floor(r)), nmin - 1);
    if (vertices.empty()) throw ConfigError("dmt curve: empty");
    if (nmin == 0) return 0.0;
    const double d0 = static_cast<double>(vertices[k].second);
    const double d1 = static_cast<double>(vertices[k + 1].second);
    return d0 + (d1 - d0) * (r - static_cast<double>(k));
}

DmtCurve optimal_dmt(int nt, int nr) {
    if (nt < 1 || nr < 1) throw ConfigError("dmt curve: antenna counts must be >= 1");
    DmtCurve c;
    c.nt = nt;
    c.nr = nr;
    for (int k = 0; k <= std::min(nt, nr); ++k) c.vertices.emplace_back(k, (nt - k) * (nr - k));
    return c;
}

namespace {

void validate_problem(const KktProblem& p) {
    if (p.nt < 1 || p.nr < 1) throw ConfigError("kkt: antenna counts must be >= 1");
    if (static_cast<int>(p.d_sq.size()) != p.nt)
        throw ConfigError("kkt: need nt squared singular values");
    for (double d : p.d_sq)
        if (d <= 0) throw ConfigError("kkt: squared singular values must be positive");
    if (p.snr <= 1.0) throw ConfigError("kkt: SNR must exceed 1 (log SNR positive)");
    if (p.delta < 0.0) throw ConfigError("kkt: delta must be nonnegative");
    if (p.r + p.delta < 0.0) throw ConfigError("kkt: r + delta must be nonnegative");
}

}  // namespace

KktSolution kkt_waterfill(const KktProblem& p) {
    validate_problem(p);
    std::vector<double> dsq = p.d_sq;
    std::sort(dsq.begin(), dsq.end(), std::greater<>());
    const double nt = static_cast<double>(p.nt);
    const double nr = static_cast<double>(p.nr);
    const double target = nt * (p.r + p.delta) * std::log(p.snr);

    auto constraint = [&](double lambda) {
        double s = 0;
        for (double d : dsq) {
            const double lvl = lambda * p.snr / (nt * d);
            if (lvl > 1.0) s += std::log(lvl);
        }
        return nr * s;
    };

    KktSolution sol;
    sol.a = RMat(p.nr, p.nt);
    if (target <= 0.0) {
        sol.lambda = *std::min_element(dsq.begin(), dsq.end()) * nt / p.snr;
        sol.objective = 0.0;
        sol.constraint_residual = 0.0;
        return sol;
    }

    double prod = 1.0;
    for (double d : dsq) prod *= d;
    double lo = *std::min_element(dsq.begin(), dsq.end()) * nt / p.snr;  // all inactive
    double hi = 10.0 * nt * std::pow(prod, 1.0 / nt) *
                std::pow(p.snr, (p.r + p.delta) / nr - 1.0);  // all-active form x 10
    while (constraint(hi) < target) hi *= 2.0;
    if (constraint(lo) > target) lo = std::min(lo, 1e-300);

    for (int it = 0; it < 300; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (constraint(mid) < target) lo = mid;
        else hi = mid;
    }
    sol.lambda = 0.5 * (lo + hi);

    double logsum = 0;
    for (int j = 0; j < p.nt; ++j) {
        const double aij = std::max(0.0, (sol.lambda * p.snr / (nt * dsq[j]) - 1.0)) / p.snr;
        for (int i = 0; i < p.nr; ++i) sol.a(i, j) = aij;
        logsum += std::log1p(aij * p.snr);
        sol.objective += nr * aij * dsq[j];
    }
    // residual of (1/nt) sum log2(1 + a snr) = (r + delta) log2 snr
    sol.constraint_residual =
        std::abs(nr * logsum / nt - (p.r + p.delta) * std::log(p.snr)) / std::log(2.0);
    return sol;
}

namespace {

// Euclidean projection onto { t >= 0, sum t >= c }.
void project_halfspace(std::vector<double>& t, double c) {
    double sum_pos = 0;
    for (double& v : t) sum_pos += std::max(0.0, v);
    if (sum_pos >= c) {
        for (double& v : t) v = std::max(0.0, v);
        return;
    }
    double lo = 0.0;
    const double mn = *std::min_element(t.begin(), t.end());
    double hi = c / static_cast<double>(t.size()) - std::min(0.0, mn) + 1.0;
    auto shifted_sum = [&](double nu) {
        double s = 0;
        for (double v : t) s += std::max(0.0, v + nu);
        return s;
    };
    while (shifted_sum(hi) < c) hi *= 2.0;
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (shifted_sum(mid) < c) lo = mid;
        else hi = mid;
    }
    const double nu = 0.5 * (lo + hi);
    for (double& v : t) v = std::max(0.0, v + nu);
}

}  // namespace

KktCrossCheck kkt_crosscheck(const KktProblem& p, int restarts, std::uint64_t seed,
                             unsigned workers) {
    validate_problem(p);
    if (p.nt * p.nr > 16) throw ConfigError("kkt_crosscheck: instance too large (nt*nr > 16)");
    if (restarts < 1) throw ConfigError("kkt_crosscheck: need at least one restart");

    KktSolution kkt = kkt_waterfill(p);
    std::vector<double> dsq = p.d_sq;
    std::sort(dsq.begin(), dsq.end(), std::greater<>());

    const std::size_t nm = static_cast<std::size_t>(p.nt) * static_cast<std::size_t>(p.nr);
    const double c = static_cast<double>(p.nt) * (p.r + p.delta) * std::log(p.snr);

    auto objective = [&](const std::vector<double>& t) {
        double f = 0;
        for (std::size_t i = 0; i < nm; ++i)
            f += dsq[i % p.nt] * std::expm1(t[i]) / p.snr;
        return f;
    };

    std::vector<double> best_obj(restarts, std::numeric_limits<double>::infinity());
    std::vector<std::uint8_t> ok(restarts, 0);

    parallel_for(static_cast<std::size_t>(restarts), workers, [&](std::size_t lo_r,
                                                                  std::size_t hi_r) {
        for (std::size_t rs = lo_r; rs < hi_r; ++rs) {
            Rng rng = Rng::for_trial(seed, 0x9f, rs);
            std::vector<double> t(nm);
            double s = 0;
            for (double& v : t) {
                v = rng.uniform01();
                s += v;
            }
            const double scale = s > 0 ? (1.0 + rng.uniform01()) * c / s : 0.0;
            for (double& v : t) v *= scale;
            project_halfspace(t, c);

            double f = objective(t);
            double step = 1.0;
            int stall = 0;
            for (int it = 0; it < 200000 && stall < 60; ++it) {
                std::vector<double> grad(nm);
                double gmax = 0;
                for (std::size_t i = 0; i < nm; ++i) {
                    grad[i] = dsq[i % p.nt] * std::exp(t[i]) / p.snr;
                    gmax = std::max(gmax, grad[i]);
                }
                if (gmax == 0) break;
                bool accepted = false;
                for (int bt = 0; bt < 60 && !accepted; ++bt) {
                    std::vector<double> cand(nm);
                    for (std::size_t i = 0; i < nm; ++i) cand[i] = t[i] - step * grad[i];
                    project_halfspace(cand, c);
                    const double fc = objective(cand);
                    if (fc <= f) {
                        double moved = 0;
                        for (std::size_t i = 0; i < nm; ++i)
                            moved += (cand[i] - t[i]) * (cand[i] - t[i]);
                        t = std::move(cand);
                        stall = (f - fc) <= 1e-14 * std::max(1.0, std::abs(f)) && moved < 1e-24
                                    ? stall + 1
                                    : 0;
                        f = fc;
                        accepted = true;
                        step *= 1.6;
                    } else {
                        step *= 0.5;
                    }
                }
                if (!accepted) ++stall;
            }
            best_obj[rs] = f;
            double sum = 0;
            for (double v : t) sum += v;
            ok[rs] = sum >= c - 1e-7 * std::max(1.0, c) ? 1 : 0;
        }
    });

    KktCrossCheck chk;
    chk.objective_kkt = kkt.objective;
    chk.objective_pg = std::numeric_limits<double>::infinity();
    bool any_ok = false;
    for (int rs = 0; rs < restarts; ++rs) {
        if (!ok[rs]) continue;
        any_ok = true;
        chk.objective_pg = std::min(chk.objective_pg, best_obj[rs]);
    }
    if (!any_ok) {
        chk.converged = false;
        return chk;
    }
    const double denom = std::max(std::abs(chk.objective_kkt), 1e-300);
    chk.gap = std::abs(chk.objective_kkt - chk.objective_pg) / denom;
    chk.converged = true;
    return chk;
}

namespace {

struct ExponentProblem {
    int nt, nr;
    double b1;  // row-max constraint level
    double b2;  // entry-sum budget
    double penalty;

    double g1(const RMat& a) const {
        double s = 0;
        for (int i = 0; i < nr; ++i) {
            double rm = 0;
            for (int j = 0; j < nt; ++j) rm = std::max(rm, std::max(0.0, 1.0 - a(i, j)));
            s += rm;
        }
        return s;
    }
    double g2(const RMat& a) const {
        double s = 0;
        for (int i = 0; i < nr; ++i)
            for (int j = 0; j < nt; ++j) s += std::max(0.0, 1.0 - a(i, j));
        return s;
    }
    double merit(const RMat& a) const {
        double obj = 0;
        for (int i = 0; i < nr; ++i)
            for (int j = 0; j < nt; ++j) obj += a(i, j);
        return obj + penalty * (std::max(0.0, b1 - g1(a)) + std::max(0.0, g2(a) - b2));
    }
};

// Exact coordinate minimization: the merit is piecewise linear in one
// coordinate, so its minimum sits on a breakpoint.
double solve_eta(const ExponentProblem& ep, Rng& rng, int starts, RMat* alpha_out) {
    const int nt = ep.nt, nr = ep.nr;
    double best = std::numeric_limits<double>::infinity();
    RMat best_a;

    for (int s = 0; s < starts; ++s) {
        RMat a(nr, nt);
        if (s == 0)
            for (auto i = 0; i < nr; ++i)
                for (int j = 0; j < nt; ++j) a(i, j) = 1.0;
        else if (s == 1)
            ;  // all zeros
        else if (s == 2)
            for (auto i = 0; i < nr; ++i)
                for (int j = 0; j < nt; ++j)
                    a(i, j) = std::clamp(1.0 - ep.b1 / static_cast<double>(nr), 0.0, 1.0);
        else
            for (auto i = 0; i < nr; ++i)
                for (int j = 0; j < nt; ++j) a(i, j) = rng.uniform01();

        for (int sweep = 0; sweep < 400; ++sweep) {
            bool changed = false;
            for (int i = 0; i < nr; ++i)
                for (int j = 0; j < nt; ++j) {
                    const double cur = a(i, j);
                    // context without this coordinate
                    double rm_other = 0;
                    for (int jj = 0; jj < nt; ++jj)
                        if (jj != j) rm_other = std::max(rm_other, std::max(0.0, 1.0 - a(i, jj)));
                    double g1_other = 0;
                    for (int ii = 0; ii < nr; ++ii) {
                        if (ii == i) continue;
                        double rm = 0;
                        for (int jj = 0; jj < nt; ++jj)
                            rm = std::max(rm, std::max(0.0, 1.0 - a(ii, jj)));
                        g1_other += rm;
                    }
                    double g2_other = ep.g2(a) - std::max(0.0, 1.0 - cur);

                    double cands[6] = {0.0, 1.0, 1.0 - rm_other,
                                       1.0 - (ep.b2 - g2_other),
                                       1.0 - (ep.b1 - g1_other - 0.0),
                                       cur};
                    double bc = cur, bm = std::numeric_limits<double>::infinity();
                    for (double cand : cands) {
                        const double v = std::clamp(cand, 0.0, 1.0);
                        a(i, j) = v;
                        const double m = ep.merit(a);
                        if (m < bm - 1e-15 || (std::abs(m - bm) <= 1e-15 && v < bc)) {
                            bm = m;
                            bc = v;
                        }
                    }
                    a(i, j) = bc;
                    if (std::abs(bc - cur) > 1e-15) changed = true;
                }
            if (!changed) break;
        }

        if (ep.g1(a) >= ep.b1 - 1e-9 && ep.g2(a) <= ep.b2 + 1e-9) {
            double obj = 0;
            for (int i = 0; i < nr; ++i)
                for (int j = 0; j < nt; ++j) obj += a(i, j);
            if (obj < best) {
                best = obj;
                best_a = a;
            }
        }
    }
    if (alpha_out) *alpha_out = best_a;
    return best;
}

}  // namespace

NearOutageExponent near_outage_exponent(int nt, int nr, double r, int starts,
                                        std::uint64_t seed) {
    if (nt < 1 || nr < 1) throw ConfigError("near_outage_exponent: antenna counts must be >= 1");
    if (r < 0 || r > static_cast<double>(nr))
        throw ConfigError("near_outage_exponent: r must lie in [0, n_r]");

    NearOutageExponent res;
    res.closed_form = static_cast<double>(nt) * (static_cast<double>(nr) - r);

    Rng rng(seed);
    const double etas[3] = {0.1, 0.01, 0.001};
    for (double eta : etas) {
        // keep the strict constraint attainable when r is at the n_r edge
        const double eta_eff = std::min(eta, std::max(0.0, (static_cast<double>(nr) - r) / 2.0));
        ExponentProblem ep;
        ep.nt = nt;
        ep.nr = nr;
        ep.b1 = r + eta_eff;
        ep.b2 = static_cast<double>(nt) * (r + eta_eff);
        ep.penalty = std::max(50.0, 8.0 * nt * nr);
        RMat alpha;
        const double v = solve_eta(ep, rng, starts, &alpha);
        if (!std::isfinite(v))
            throw NumericalError("near_outage_exponent: no feasible point found");
        res.per_eta.emplace_back(eta_eff, v);
        res.alpha = alpha;
    }

    const auto [e2, f2] = res.per_eta[res.per_eta.size() - 2];
    const auto [e3, f3] = res.per_eta[res.per_eta.size() - 1];
    if (std::abs(e2 - e3) < 1e-15) {
        res.infimum = f3;
    } else {
        const double m = (f2 - f3) / (e2 - e3);
        res.infimum = f3 - m * e3;
    }
    res.matches_closed_form =
        std::abs(res.infimum - res.closed_form) <= 0.02 * std::max(1.0, res.closed_form);
    return res;
}

double q_function(double x) { return 0.5 * std::erfc(x / std::sqrt(2.0)); }

}  // namespace stbclab
