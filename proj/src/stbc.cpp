#include "stbclab/stbc.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "stbclab/constants.hpp"

namespace stbclab {

namespace {

constexpr cplx kJ{0.0, 1.0};

long long gcd_ll(long long a, long long b) { return std::gcd(a, b); }

}  // namespace

void validate(const LinearStbc& code) {
    if (code.nt == 0 || code.t == 0 || code.k == 0)
        throw ConfigError("code '" + code.name + "': dimensions must be positive");
    if (code.weights.size() != 2 * code.k)
        throw ConfigError("code '" + code.name + "': expected 2k weight matrices");
    for (const CMat& w : code.weights) {
        if (w.rows() != code.nt || w.cols() != code.t)
            throw ConfigError("code '" + code.name + "': weight matrix has wrong shape");
        if (!w.all_finite())
            throw ConfigError("code '" + code.name + "': weight matrix has non-finite entries");
    }
}

GeneratorMatrix generator_matrix(const LinearStbc& code) {
    validate(code);
    const std::size_t rows = 2 * code.t * code.nt;
    const std::size_t cols = 2 * code.k;
    RMat g(rows, cols);
    for (std::size_t c = 0; c < cols; ++c) {
        std::vector<double> col = vec_realify(vec_col_major(code.weights[c]));
        for (std::size_t r = 0; r < rows; ++r) g(r, c) = col[r];
    }
    // rank from the spectrum of G^T G
    std::vector<double> ev = symmetric_eigvals(g.transpose() * g);
    double smax = ev.empty() ? 0.0 : std::sqrt(std::max(ev.front(), 0.0));
    std::size_t rank = 0;
    for (double v : ev)
        if (v > 0 && std::sqrt(v) > tol::rank_threshold * std::max(smax, 1e-300)) ++rank;
    return {std::move(g), rank};
}

Rational code_rate(const LinearStbc& code) {
    GeneratorMatrix g = generator_matrix(code);
    long long num = static_cast<long long>(g.rank);
    long long den = static_cast<long long>(2 * code.t);
    long long d = gcd_ll(num == 0 ? den : num, den);
    return {num / d, den / d};
}

CMat encode(const LinearStbc& code, std::span<const double> s, double mu) {
    if (s.size() != 2 * code.k)
        throw ConfigError("encode: symbol vector must have length 2k = " +
                          std::to_string(2 * code.k));
    CMat x(code.nt, code.t);
    for (std::size_t i = 0; i < s.size(); ++i) {
        const double c = s[i];
        if (c == 0.0) continue;
        const CMat& w = code.weights[i];
        for (std::size_t e = 0; e < x.entries().size(); ++e)
            x.entries()[e] += c * w.entries()[e];
    }
    if (mu != 1.0)
        for (cplx& e : x.entries()) e *= mu;
    return x;
}

LinearStbc puncture(const LinearStbc& code, const std::vector<std::size_t>& keep) {
    validate(code);
    if (keep.empty()) throw ConfigError("puncture: index set must not be empty");
    std::vector<std::size_t> idx = keep;
    std::sort(idx.begin(), idx.end());
    if (std::adjacent_find(idx.begin(), idx.end()) != idx.end())
        throw ConfigError("puncture: duplicate symbol index");
    if (idx.back() >= code.k)
        throw ConfigError("puncture: symbol index out of range (k = " + std::to_string(code.k) +
                          ")");
    LinearStbc out;
    out.name = code.name + "_punctured";
    out.nt = code.nt;
    out.t = code.t;
    out.k = idx.size();
    out.coord_kind = code.coord_kind;
    for (std::size_t i : idx) {
        out.weights.push_back(code.weights[2 * i]);
        out.weights.push_back(code.weights[2 * i + 1]);
    }
    return out;
}

LinearStbc lattice_rebase(const LinearStbc& code, const RMat& gl) {
    validate(code);
    const std::size_t n = 2 * code.k;
    if (gl.rows() != n || gl.cols() != n)
        throw ConfigError("lattice_rebase: basis must be 2k x 2k");
    // invertibility check on the scale of the matrix
    std::vector<double> ev = symmetric_eigvals(gl.transpose() * gl);
    double smax = std::sqrt(std::max(ev.front(), 0.0));
    if (ev.back() <= 0 || std::sqrt(std::max(ev.back(), 0.0)) <= tol::rank_threshold * smax)
        throw ConfigError("lattice_rebase: basis matrix is singular");

    LinearStbc out;
    out.name = code.name + "_rebased";
    out.nt = code.nt;
    out.t = code.t;
    out.k = code.k;
    out.coord_kind = CoordKind::integer;
    out.weights.reserve(n);
    for (std::size_t j = 0; j < n; ++j) {
        CMat w(code.nt, code.t);
        for (std::size_t i = 0; i < n; ++i) {
            const double c = gl(i, j);
            if (c == 0.0) continue;
            for (std::size_t e = 0; e < w.entries().size(); ++e)
                w.entries()[e] += c * code.weights[i].entries()[e];
        }
        out.weights.push_back(std::move(w));
    }
    return out;
}

std::vector<std::vector<double>> coordinate_sets(const LinearStbc& code, int m) {
    Pam p = pam(m);
    return std::vector<std::vector<double>>(2 * code.k, p.points);
}

double mean_codeword_energy(const LinearStbc& code, int m, double mu) {
    Pam p = pam(m);
    const double m1 = pam_mean(p);
    double m2 = 0;
    for (double v : p.points) m2 += v * v;
    m2 /= static_cast<double>(p.points.size());
    const double var = m2 - m1 * m1;

    // E||Gs||^2 = sum_i var_i ||g_i||^2 + ||sum_i mean_i g_i||^2
    GeneratorMatrix gen = generator_matrix(code);
    const RMat& g = gen.g;
    double e = 0;
    for (std::size_t c = 0; c < g.cols(); ++c) {
        double n2 = 0;
        for (std::size_t r = 0; r < g.rows(); ++r) n2 += g(r, c) * g(r, c);
        e += var * n2;
    }
    for (std::size_t r = 0; r < g.rows(); ++r) {
        double s = 0;
        for (std::size_t c = 0; c < g.cols(); ++c) s += m1 * g(r, c);
        e += s * s;
    }
    return mu * mu * e;
}

int SchemeConfig::m_at(double snr_linear) const {
    if (snr_linear <= 0) throw ConfigError("scheme: SNR must be positive");
    const double exponent = r * static_cast<double>(code.t) / (2.0 * static_cast<double>(code.k));
    const double raw = std::pow(snr_linear, exponent);
    if (even_only) {
        long long m = 2 * std::llround(raw / 2.0);
        return static_cast<int>(std::max<long long>(2, m));
    }
    return static_cast<int>(std::max<long long>(2, std::llround(raw)));
}

double SchemeConfig::mu_for(int m, double snr_linear) const {
    const double e1 = mean_codeword_energy(code, m, 1.0);
    if (e1 <= 0) throw NumericalError("scheme: zero-energy design cannot be normalized");
    return std::sqrt(static_cast<double>(code.t) * snr_linear / e1);
}

double SchemeConfig::mu_at(double snr_linear) const { return mu_for(m_at(snr_linear), snr_linear); }

SchemeConfig scheme(const LinearStbc& code, double r, std::vector<double> snr_grid_db,
                    bool even_only) {
    validate(code);
    if (r < 0) throw ConfigError("scheme: multiplexing gain must be nonnegative");
    Rational rate = code_rate(code);
    if (r > rate.value() + 1e-12)
        throw ConfigError("scheme: multiplexing gain " + std::to_string(r) +
                          " exceeds the code rate rank(G)/(2T) = " + std::to_string(rate.value()) +
                          "; rates above the code rate are not achievable by this design");
    if (snr_grid_db.empty()) throw ConfigError("scheme: SNR grid must not be empty");
    if (!std::is_sorted(snr_grid_db.begin(), snr_grid_db.end()))
        throw ConfigError("scheme: SNR grid must be ascending");
    SchemeConfig cfg;
    cfg.code = code;
    cfg.r = r;
    cfg.snr_grid_db = std::move(snr_grid_db);
    cfg.even_only = even_only;
    return cfg;
}

double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

// ---- built-in designs ----

double ciod_rotation_angle() { return 0.5 * std::atan(2.0); }

LinearStbc alamouti() {
    // X = [[s1, -s2*], [s2, s1*]]
    LinearStbc c;
    c.name = "alamouti";
    c.nt = 2;
    c.t = 2;
    c.k = 2;
    CMat a1i(2, 2), a1q(2, 2), a2i(2, 2), a2q(2, 2);
    a1i(0, 0) = 1;
    a1i(1, 1) = 1;
    a1q(0, 0) = kJ;
    a1q(1, 1) = -kJ;
    a2i(0, 1) = -1;
    a2i(1, 0) = 1;
    a2q(0, 1) = kJ;
    a2q(1, 0) = kJ;
    c.weights = {a1i, a1q, a2i, a2q};
    return c;
}

LinearStbc golden() {
    // X = [[alpha (s1 + s2 th), alpha (s3 + s4 th)],
    //      [j albar (s3 + s4 thbar), albar (s1 + s2 thbar)]]
    // th = (1+sqrt5)/2, thbar = (1-sqrt5)/2, alpha = 1 + j thbar, albar = 1 + j th.
    const double th = (1.0 + std::sqrt(5.0)) / 2.0;
    const double thbar = (1.0 - std::sqrt(5.0)) / 2.0;
    const cplx alpha = 1.0 + kJ * thbar;
    const cplx albar = 1.0 + kJ * th;

    auto complex_weight = [&](int sym) {
        CMat b(2, 2);
        switch (sym) {
            case 0: b(0, 0) = alpha; b(1, 1) = albar; break;
            case 1: b(0, 0) = alpha * th; b(1, 1) = albar * thbar; break;
            case 2: b(0, 1) = alpha; b(1, 0) = kJ * albar; break;
            default: b(0, 1) = alpha * th; b(1, 0) = kJ * albar * thbar; break;
        }
        return b;
    };

    LinearStbc c;
    c.name = "golden";
    c.nt = 2;
    c.t = 2;
    c.k = 4;
    for (int i = 0; i < 4; ++i) {
        CMat b = complex_weight(i);
        c.weights.push_back(b);        // A_iI
        c.weights.push_back(kJ * b);   // A_iQ, complex-linear design
    }
    return c;
}

LinearStbc golden_punctured() {
    LinearStbc c = puncture(golden(), {0, 1});
    c.name = "golden_punctured";
    return c;
}

namespace {

// Folds the constellation rotation into the weights: symbols become plain
// M-PAM pairs while codewords are unchanged.
LinearStbc fold_rotation(LinearStbc base, double theta) {
    const double ct = std::cos(theta), st = std::sin(theta);
    LinearStbc out = base;
    for (std::size_t i = 0; i < base.k; ++i) {
        const CMat& ai = base.weights[2 * i];
        const CMat& aq = base.weights[2 * i + 1];
        out.weights[2 * i] = ct * ai + st * aq;
        out.weights[2 * i + 1] = (-st) * ai + ct * aq;
    }
    return out;
}

LinearStbc ciod2_base() {
    // diag(x1I + j x2Q, x2I + j x1Q)
    LinearStbc c;
    c.name = "ciod2";
    c.nt = 2;
    c.t = 2;
    c.k = 2;
    CMat a1i(2, 2), a1q(2, 2), a2i(2, 2), a2q(2, 2);
    a1i(0, 0) = 1;
    a1q(1, 1) = kJ;
    a2i(1, 1) = 1;
    a2q(0, 0) = kJ;
    c.weights = {a1i, a1q, a2i, a2q};
    return c;
}

LinearStbc ciod4_base() {
    // [[ x1I+j x3Q,  x2I+j x4Q,  0, 0],
    //  [-x2I+j x4Q,  x1I-j x3Q,  0, 0],
    //  [0, 0,  x3I+j x1Q,  x4I+j x2Q],
    //  [0, 0, -x4I+j x2Q,  x3I-j x1Q]]
    LinearStbc c;
    c.name = "ciod4";
    c.nt = 4;
    c.t = 4;
    c.k = 4;
    CMat a1i(4, 4), a1q(4, 4), a2i(4, 4), a2q(4, 4), a3i(4, 4), a3q(4, 4), a4i(4, 4), a4q(4, 4);
    a1i(0, 0) = 1;
    a1i(1, 1) = 1;
    a1q(2, 2) = kJ;
    a1q(3, 3) = -kJ;
    a2i(0, 1) = 1;
    a2i(1, 0) = -1;
    a2q(2, 3) = kJ;
    a2q(3, 2) = kJ;
    a3i(2, 2) = 1;
    a3i(3, 3) = 1;
    a3q(0, 0) = kJ;
    a3q(1, 1) = -kJ;
    a4i(2, 3) = 1;
    a4i(3, 2) = -1;
    a4q(0, 1) = kJ;
    a4q(1, 0) = kJ;
    c.weights = {a1i, a1q, a2i, a2q, a3i, a3q, a4i, a4q};
    return c;
}

}  // namespace

LinearStbc ciod2_with_angle(double theta) {
    LinearStbc c = fold_rotation(ciod2_base(), theta);
    c.name = theta == 0.0 ? "ciod2_unrotated" : "ciod2";
    return c;
}

LinearStbc ciod4_with_angle(double theta) {
    LinearStbc c = fold_rotation(ciod4_base(), theta);
    c.name = theta == 0.0 ? "ciod4_unrotated" : "ciod4";
    return c;
}

LinearStbc ciod2() { return ciod2_with_angle(ciod_rotation_angle()); }
LinearStbc ciod4() { return ciod4_with_angle(ciod_rotation_angle()); }

LinearStbc ciod4_rotated_qam() { return ciod4(); }

const std::vector<CatalogEntry>& catalog() {
    static const std::vector<CatalogEntry> entries = [] {
        std::vector<CatalogEntry> v;
        auto built_in = [&](LinearStbc code, std::string nr_note, std::string constellation,
                            std::string description) {
            CatalogEntry e;
            e.name = code.name;
            e.nt = code.nt;
            e.t = code.t;
            e.rate = code_rate(code).value();
            e.nr_note = std::move(nr_note);
            e.constellation = std::move(constellation);
            e.description = std::move(description);
            e.external = false;
            e.code = std::move(code);
            v.push_back(std::move(e));
        };
        built_in(alamouti(), "1", "QAM",
                 "orthogonal 2x2 design, one complex symbol per channel use");
        built_in(golden(), "any", "QAM",
                 "full-rate 2x2 design on the golden-ratio lattice");
        built_in(golden_punctured(), "1", "QAM",
                 "diagonal restriction of the golden code to its first complex pair");
        built_in(ciod2(), "1", "rotated QAM",
                 "coordinate-interleaved orthogonal design, 2 antennas, PAM-basis weights");
        built_in(ciod4(), "1", "rotated QAM",
                 "coordinate-interleaved orthogonal design, 4 antennas, PAM-basis weights");

        auto external = [&](std::string name, std::size_t nt, std::size_t t, double rate,
                            std::string nr_note, std::string constellation,
                            std::string description) {
            CatalogEntry e;
            e.name = std::move(name);
            e.nt = nt;
            e.t = t;
            e.rate = rate;
            e.nr_note = std::move(nr_note);
            e.constellation = std::move(constellation);
            e.description = std::move(description) + " (construction external)";
            e.external = true;
            v.push_back(std::move(e));
        };
        external("perfect_3", 3, 3, 3, "any", "QAM/HEX", "perfect code for 3 antennas");
        external("perfect_4", 4, 4, 4, "any", "QAM", "perfect code for 4 antennas");
        external("perfect_6", 6, 6, 6, "any", "QAM/HEX", "perfect code for 6 antennas");
        external("kiran_rajan", 4, 4, 4, "any", "QAM/HEX",
                 "division-algebra family for n_t in {2^n, 3*2^n, 2*3^n, q^n(q-1)/2}");
        external("lu_hollanti_rate2", 4, 6, 2, "2", "QAM",
                 "rectangular rate-2 family for n_t > 2");
        external("lu_hollanti_rate_nt_minus_1", 4, 6, 3, "n_t - 1", "QAM",
                 "rectangular rate-(n_t-1) family for n_t > 2");
        external("block_diagonal", 4, 4, 2, "n_r < n_t", "QAM",
                 "block-diagonal asymmetric family for n_t = m * n_r");
        external("fast_decodable_4x2", 4, 4, 2, "2", "QAM",
                 "fast-decodable rate-2 design for the 4x2 channel");
        external("qostbc_4x1", 4, 4, 1, "1", "QAM",
                 "full-diversity quasi-orthogonal design for 4 antennas");
        return v;
    }();
    return entries;
}

const CatalogEntry& catalog_entry(const std::string& name) {
    for (const CatalogEntry& e : catalog())
        if (e.name == name) return e;
    std::string msg = "unknown code '" + name + "'; valid names:";
    for (const CatalogEntry& e : catalog()) msg += " " + e.name;
    throw ConfigError(msg);
}

LinearStbc catalog_code(const std::string& name) {
    const CatalogEntry& e = catalog_entry(name);
    if (!e.code)
        throw ConfigError("code '" + name + "' is a catalog metadata entry; its construction is "
                          "external and it cannot be instantiated");
    return *e.code;
}

}  // namespace stbclab
