#include "stbclab/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "stbclab/constants.hpp"
#include "stbclab/parallel.hpp"

namespace stbclab {

namespace {

std::uint64_t splitmix(std::uint64_t& x) {
    x += 0x9e3779b97f4a7c15ull;
    std::uint64_t z = x;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

std::uint64_t mix(std::uint64_t a, std::uint64_t b) {
    std::uint64_t s = a ^ (b + 0x9e3779b97f4a7c15ull + (a << 6) + (a >> 2));
    return splitmix(s);
}

}  // namespace

Rng::Rng(std::uint64_t seed) : state_(seed) {
    // decorrelate trivially related seeds
    splitmix(state_);
}

Rng Rng::for_trial(std::uint64_t seed, std::uint64_t stream, std::uint64_t trial) {
    return Rng(mix(mix(seed, stream), trial));
}

std::uint64_t Rng::next_u64() { return splitmix(state_); }

double Rng::uniform01() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double Rng::gauss() {
    if (has_cached_) {
        has_cached_ = false;
        return cached_;
    }
    double u1 = uniform01();
    while (u1 <= 0.0) u1 = uniform01();
    const double u2 = uniform01();
    const double mag = std::sqrt(-2.0 * std::log(u1));
    const double ang = 2.0 * std::numbers::pi * u2;
    cached_ = mag * std::sin(ang);
    has_cached_ = true;
    return mag * std::cos(ang);
}

int Rng::uniform_int(int n) {
    return static_cast<int>(next_u64() % static_cast<std::uint64_t>(n));
}

cplx Rng::cgauss() {
    const double s = std::sqrt(0.5);
    return {s * gauss(), s * gauss()};
}

CMat sample_channel(std::size_t nr, std::size_t nt, Rng& rng) {
    CMat h(nr, nt);
    for (cplx& e : h.entries()) e = rng.cgauss();
    return h;
}

CMat sample_noise(std::size_t nr, std::size_t t, Rng& rng) { return sample_channel(nr, t, rng); }

CMat random_unitary(std::size_t n, Rng& rng) {
    // Householder QR of a Gaussian matrix, applied to the identity.
    CMat a = sample_channel(n, n, rng);
    CMat q = CMat::identity(n);
    for (std::size_t k = 0; k < n; ++k) {
        double norm2 = 0;
        for (std::size_t i = k; i < n; ++i) norm2 += std::norm(a(i, k));
        const double norm = std::sqrt(norm2);
        if (norm == 0.0) continue;
        cplx phase = a(k, k);
        phase = std::abs(phase) > 0 ? phase / std::abs(phase) : cplx(1.0, 0.0);
        std::vector<cplx> v(n - k);
        v[0] = a(k, k) + phase * norm;
        for (std::size_t i = k + 1; i < n; ++i) v[i - k] = a(i, k);
        double vnorm2 = 0;
        for (const cplx& t : v) vnorm2 += std::norm(t);
        if (vnorm2 == 0.0) continue;
        auto reflect = [&](CMat& m) {
            for (std::size_t j = 0; j < n; ++j) {
                cplx dot = 0;
                for (std::size_t i = k; i < n; ++i) dot += std::conj(v[i - k]) * m(i, j);
                const cplx f = 2.0 * dot / vnorm2;
                for (std::size_t i = k; i < n; ++i) m(i, j) -= f * v[i - k];
            }
        };
        reflect(a);
        reflect(q);
    }
    return q.hermitian();  // columns of Q, unitary either way
}

WilsonInterval wilson_interval(std::uint64_t successes, std::uint64_t trials, double z) {
    if (trials == 0) return {0.0, 1.0};
    const double n = static_cast<double>(trials);
    const double p = static_cast<double>(successes) / n;
    const double z2 = z * z;
    const double denom = 1.0 + z2 / n;
    const double center = (p + z2 / (2 * n)) / denom;
    const double half = z / denom * std::sqrt(p * (1 - p) / n + z2 / (4 * n * n));
    return {std::max(0.0, center - half), std::min(1.0, center + half)};
}

SlopeFit dmt_slope(const std::vector<std::pair<double, double>>& snr_db_p,
                   double window_fraction) {
    if (window_fraction <= 0.0 || window_fraction > 1.0)
        throw ConfigError("dmt_slope: window fraction must be in (0, 1]");
    std::vector<std::pair<double, double>> pts;
    for (const auto& [db, p] : snr_db_p)
        if (p > 0.0) pts.emplace_back(db, p);
    const std::size_t keep = static_cast<std::size_t>(
        std::ceil(window_fraction * static_cast<double>(pts.size())));
    if (keep < pts.size()) pts.erase(pts.begin(), pts.end() - keep);
    if (pts.size() < 3)
        throw ConfigError("dmt_slope: need at least 3 grid points with nonzero error counts");

    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double m = static_cast<double>(pts.size());
    for (const auto& [db, p] : pts) {
        const double x = db / 10.0;  // log10 of linear SNR
        const double y = -std::log10(p);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    const double denom = m * sxx - sx * sx;
    if (denom <= 0) throw ConfigError("dmt_slope: SNR grid points must be distinct");
    SlopeFit fit;
    fit.slope = (m * sxy - sx * sy) / denom;
    fit.points_used = pts.size();
    double sse = 0;
    const double intercept = (sy - fit.slope * sx) / m;
    for (const auto& [db, p] : pts) {
        const double x = db / 10.0;
        const double yhat = intercept + fit.slope * x;
        const double e = -std::log10(p) - yhat;
        sse += e * e;
    }
    if (pts.size() > 2) fit.stderr_ = std::sqrt(sse / (m - 2) / (sxx - sx * sx / m));
    return fit;
}

SimStats error_probability(const SimJob& job) {
    const SchemeConfig& cfg = job.scheme;
    validate(cfg.code);
    if (job.nr < 1) throw ConfigError("error_probability: n_r must be >= 1");
    if (job.max_trials == 0) throw ConfigError("error_probability: need at least one trial");

    SimStats stats;
    const RMat gener = generator_matrix(cfg.code).g;
    for (std::size_t gi = 0; gi < cfg.snr_grid_db.size(); ++gi) {
        const double snr_db = cfg.snr_grid_db[gi];
        const double snr = db_to_linear(snr_db);
        const int m = cfg.m_at(snr);
        const double mu = cfg.mu_for(m, snr);
        const auto sets = coordinate_sets(cfg.code, m);

        PointStats pt;
        pt.snr_db = snr_db;

        // Trials are evaluated in fixed index order in chunks; the stopping
        // rule scans the ordered prefix, so results do not depend on the
        // worker count.
        const std::uint64_t chunk = 4096;
        std::vector<std::uint8_t> err(chunk);
        std::vector<std::uint8_t> fell(chunk);
        bool done = false;
        for (std::uint64_t base = 0; base < job.max_trials && !done; base += chunk) {
            const std::uint64_t nb = std::min<std::uint64_t>(chunk, job.max_trials - base);
            parallel_for(nb, job.workers, [&](std::size_t lo, std::size_t hi) {
                for (std::size_t t = lo; t < hi; ++t) {
                    const std::uint64_t trial = base + t;
                    Rng rng = Rng::for_trial(job.seed, gi, trial);
                    CMat h = sample_channel(job.nr, cfg.code.nt, rng);
                    std::vector<double> s0(2 * cfg.code.k);
                    for (std::size_t c = 0; c < s0.size(); ++c)
                        s0[c] = sets[c][static_cast<std::size_t>(rng.uniform_int(m))];
                    CMat x = encode(cfg.code, s0, mu);
                    CMat y = h * x;
                    if (job.noise_scale != 0.0) {
                        CMat nmat = sample_noise(job.nr, cfg.code.t, rng);
                        y = y + job.noise_scale * nmat;
                    }
                    const std::vector<double> yv = vec_realify(vec_col_major(y));

                    RealEquivalent eq = real_equivalent(h, gener, cfg.code.t, mu);
                    DecodeResult res;
                    bool fallback = false;
                    if (job.decoder == DecoderChoice::sphere && !eq.rank_deficient) {
                        res = sphere_decode(yv, eq, sets);
                    } else {
                        fallback = job.decoder == DecoderChoice::sphere;
                        res = ml_exhaustive(yv, eq, sets);
                    }
                    err[t] = res.s_hat != s0 ? 1 : 0;
                    fell[t] = fallback ? 1 : 0;
                }
            });
            for (std::uint64_t t = 0; t < nb; ++t) {
                ++pt.trials;
                pt.errors += err[t];
                pt.decoder_fallbacks += fell[t];
                if (job.target_errors > 0 && pt.errors >= job.target_errors) {
                    done = true;
                    break;
                }
            }
        }
        pt.pe = pt.trials ? static_cast<double>(pt.errors) / static_cast<double>(pt.trials) : 0.0;
        WilsonInterval ci = wilson_interval(pt.errors, pt.trials);
        pt.ci_lo = ci.lo;
        pt.ci_hi = ci.hi;
        stats.points.push_back(pt);
    }

    std::vector<std::pair<double, double>> curve;
    for (const PointStats& p : stats.points) curve.emplace_back(p.snr_db, p.pe);
    try {
        stats.slope = dmt_slope(curve, job.slope_window);
    } catch (const ConfigError&) {
        stats.slope.reset();
    }
    return stats;
}

double mutual_info_bits(const CMat& h, double snr, std::size_t nt) {
    CMat m = CMat::identity(h.rows());
    CMat g = h * h.hermitian();
    const double f = snr / static_cast<double>(nt);
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) m(i, j) += f * g(i, j);
    const double d = det_c(std::move(m)).real();
    return std::log2(std::max(d, 1e-300));
}

double siso_outage_closed_form(double snr, double rate_bits) {
    return 1.0 - std::exp(-(std::pow(2.0, rate_bits) - 1.0) / snr);
}

OutageResult outage_probability(const OutageJob& job) {
    if (job.nt == 0 || job.nr == 0) throw ConfigError("outage: antenna counts must be positive");
    if (job.trials == 0) throw ConfigError("outage: need at least one trial");
    OutageResult out;
    out.importance = job.importance;

    for (std::size_t gi = 0; gi < job.snr_grid_db.size(); ++gi) {
        const double snr_db = job.snr_grid_db[gi];
        const double snr = db_to_linear(snr_db);
        const double rate = job.r * std::log2(snr) + job.rate_offset_bits;

        OutagePoint pt;
        pt.snr_db = snr_db;
        pt.trials = job.trials;
        pt.rate_bits = rate;

        if (!job.importance) {
            std::vector<std::uint8_t> hits(job.trials);
            parallel_for(job.trials, job.workers, [&](std::size_t lo, std::size_t hi) {
                for (std::size_t t = lo; t < hi; ++t) {
                    Rng rng = Rng::for_trial(job.seed, gi, t);
                    CMat h = sample_channel(job.nr, job.nt, rng);
                    hits[t] = mutual_info_bits(h, snr, job.nt) <= rate ? 1 : 0;
                }
            });
            std::uint64_t k = 0;
            for (std::uint8_t v : hits) k += v;
            pt.p = static_cast<double>(k) / static_cast<double>(job.trials);
            WilsonInterval ci = wilson_interval(k, job.trials);
            pt.ci_lo = ci.lo;
            pt.ci_hi = ci.hi;
        } else {
            // Variance-scaled sampling: draw entries CN(0, v) with v at the
            // outage scale and reweight by the density ratio. Unbiased for
            // any v in (0, 1]; v targets the regime where every entry is
            // O(1/SNR).
            const double v = std::min(
                1.0, static_cast<double>(job.nt) * (std::pow(2.0, rate) - 1.0) / snr);
            const double sv = std::sqrt(v);
            const std::size_t dim = job.nt * job.nr;
            std::vector<double> w(job.trials, 0.0);
            parallel_for(job.trials, job.workers, [&](std::size_t lo, std::size_t hi) {
                for (std::size_t t = lo; t < hi; ++t) {
                    Rng rng = Rng::for_trial(job.seed, gi, t);
                    CMat h = sample_channel(job.nr, job.nt, rng);
                    double norm2 = 0;
                    for (cplx& e : h.entries()) {
                        e *= sv;
                        norm2 += std::norm(e);
                    }
                    if (mutual_info_bits(h, snr, job.nt) <= rate)
                        w[t] = std::pow(v, static_cast<double>(dim)) *
                               std::exp(norm2 * (1.0 / v - 1.0));
                }
            });
            double mean = 0;
            for (double x : w) mean += x;
            mean /= static_cast<double>(job.trials);
            double var = 0;
            for (double x : w) var += (x - mean) * (x - mean);
            var /= std::max<double>(1.0, static_cast<double>(job.trials - 1));
            const double se = std::sqrt(var / static_cast<double>(job.trials));
            pt.p = mean;
            pt.ci_lo = std::max(0.0, mean - 1.959963984540054 * se);
            pt.ci_hi = mean + 1.959963984540054 * se;
        }
        out.points.push_back(pt);
    }

    std::vector<std::pair<double, double>> curve;
    for (const OutagePoint& p : out.points) curve.emplace_back(p.snr_db, p.p);
    try {
        out.slope = dmt_slope(curve, job.slope_window);
    } catch (const ConfigError&) {
        out.slope.reset();
    }
    return out;
}

CapacityCheck capacity_bound_check(const LinearStbc& code, int nr, double alpha, double snr,
                                   std::uint64_t mc_trials, std::uint64_t seed, unsigned workers) {
    validate(code);
    if (alpha <= 0) throw ConfigError("capacity_bound_check: alpha must be positive");
    if (nr < 1) throw ConfigError("capacity_bound_check: n_r must be >= 1");
    if (mc_trials < 2) throw ConfigError("capacity_bound_check: need at least 2 trials");

    GeneratorMatrix gen = generator_matrix(code);
    const RMat& g = gen.g;
    const std::size_t twok = g.cols();
    const double t2 = 2.0 * static_cast<double>(code.t);

    CapacityCheck chk;
    std::vector<double> ev = symmetric_eigvals(g.transpose() * g);
    const double cutoff =
        tol::rank_threshold * tol::rank_threshold * std::max(ev.empty() ? 0.0 : ev.front(), 1e-300);
    for (double d : ev)
        if (d > cutoff) {
            chk.rhs += std::log2(1.0 + alpha * static_cast<double>(nr) * d * snr);
            ++chk.rhs_terms;
        }
    chk.rhs /= t2;

    // lhs with the isotropic input Q = (alpha SNR / 2k) I, via
    // det(I + Hbar G Q G^T Hbar^T) = det(I + q G^T Hbar^T Hbar G).
    const double q = alpha * snr / static_cast<double>(twok);
    std::vector<double> samples(mc_trials, 0.0);
    parallel_for(mc_trials, workers, [&](std::size_t lo, std::size_t hi) {
        for (std::size_t t = lo; t < hi; ++t) {
            Rng rng = Rng::for_trial(seed, 0xCAFEull, t);
            CMat h = sample_channel(static_cast<std::size_t>(nr), code.nt, rng);
            RMat hbar = kron_identity(code.t, check_realify(h));
            RMat hg = hbar * g;
            RMat m = hg.transpose() * hg;
            RMat inner = RMat::identity(twok);
            for (std::size_t i = 0; i < twok; ++i)
                for (std::size_t j = 0; j < twok; ++j) inner(i, j) += q * m(i, j);
            samples[t] = std::log2(std::max(det_real(std::move(inner)), 1e-300)) / t2;
        }
    });
    double mean = 0;
    for (double s : samples) mean += s;
    mean /= static_cast<double>(mc_trials);
    double var = 0;
    for (double s : samples) var += (s - mean) * (s - mean);
    var /= static_cast<double>(mc_trials - 1);
    chk.lhs = mean;
    chk.stderr_ = std::sqrt(var / static_cast<double>(mc_trials));
    chk.pass = chk.lhs <= chk.rhs + 3.0 * chk.stderr_;
    return chk;
}

std::vector<double> unitary_outage_agreement(std::size_t nt, std::size_t nr, double r,
                                             const std::vector<double>& snr_grid_db,
                                             std::uint64_t trials, std::uint64_t seed) {
    if (trials == 0) throw ConfigError("unitary_outage_agreement: need at least one trial");
    std::vector<double> out;
    auto member = [&](const CMat& h, double snr) {
        double lhs = 0;
        for (const cplx& e : h.entries()) lhs += std::log2(1.0 + snr * std::norm(e));
        return lhs > static_cast<double>(nt) * r * std::log2(snr);
    };
    for (std::size_t gi = 0; gi < snr_grid_db.size(); ++gi) {
        const double snr = db_to_linear(snr_grid_db[gi]);
        std::uint64_t agree = 0;
        for (std::uint64_t t = 0; t < trials; ++t) {
            Rng rng = Rng::for_trial(seed, gi, t);
            CMat h = sample_channel(nr, nt, rng);
            CMat u = random_unitary(nt, rng);
            if (member(h, snr) == member(h * u, snr)) ++agree;
        }
        out.push_back(static_cast<double>(agree) / static_cast<double>(trials));
    }
    return out;
}

}  // namespace stbclab
