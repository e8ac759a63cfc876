#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "stbclab/simulator.hpp"
#include "stbclab/stbc.hpp"

using namespace stbclab;

namespace {

double max_entry_diff(const CMat& a, const CMat& b) {
    double d = 0;
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) d = std::max(d, std::abs(a(i, j) - b(i, j)));
    return d;
}

// Direct evaluation of the golden-code closed form, independent of the
// weight-matrix path.
CMat golden_direct(const std::vector<double>& s) {
    const double th = (1.0 + std::sqrt(5.0)) / 2.0;
    const double thb = (1.0 - std::sqrt(5.0)) / 2.0;
    const cplx j(0.0, 1.0);
    const cplx alpha = 1.0 + j * thb;
    const cplx albar = 1.0 + j * th;
    const cplx s1(s[0], s[1]), s2(s[2], s[3]), s3(s[4], s[5]), s4(s[6], s[7]);
    CMat x(2, 2);
    x(0, 0) = alpha * (s1 + s2 * th);
    x(0, 1) = alpha * (s3 + s4 * th);
    x(1, 0) = j * albar * (s3 + s4 * thb);
    x(1, 1) = albar * (s1 + s2 * thb);
    return x;
}

}  // namespace

TEST_CASE("alamouti generator: 8x4, rank 4, orthogonal columns of norm sqrt(2)") {
    GeneratorMatrix g = generator_matrix(alamouti());
    CHECK(g.g.rows() == 8);
    CHECK(g.g.cols() == 4);
    CHECK(g.rank == 4);
    for (std::size_t a = 0; a < 4; ++a) {
        double nn = 0;
        for (std::size_t i = 0; i < 8; ++i) nn += g.g(i, a) * g.g(i, a);
        CHECK(nn == doctest::Approx(2.0));
        for (std::size_t b = a + 1; b < 4; ++b) {
            double dot = 0;
            for (std::size_t i = 0; i < 8; ++i) dot += g.g(i, a) * g.g(i, b);
            CHECK(dot == doctest::Approx(0.0));
        }
    }
}

TEST_CASE("ciod4 generator: 32x8, rank 8") {
    GeneratorMatrix g = generator_matrix(ciod4());
    CHECK(g.g.rows() == 32);
    CHECK(g.g.cols() == 8);
    CHECK(g.rank == 8);
}

TEST_CASE("duplicated weight matrix reports reduced rank without error") {
    LinearStbc c = alamouti();
    c.weights[2] = c.weights[0];
    GeneratorMatrix g = generator_matrix(c);
    CHECK(g.rank < 4);
}

TEST_CASE("code rates of the built-in designs") {
    Rational ra = code_rate(alamouti());
    CHECK(ra.num == 1);
    CHECK(ra.den == 1);
    Rational rg = code_rate(golden());
    CHECK(rg.num == 2);
    CHECK(rg.den == 1);
    Rational rc = code_rate(ciod4());
    CHECK(rc.num == 1);
    CHECK(rc.den == 1);
    Rational rp = code_rate(golden_punctured());
    CHECK(rp.num == 1);
    CHECK(rp.den == 1);
}

TEST_CASE("encode of the zero vector is the zero matrix") {
    std::vector<double> s(8, 0.0);
    CMat x = encode(golden(), s, 1.0);
    CHECK(x.frob_norm() == 0.0);
}

TEST_CASE("encode of a basis vector returns the corresponding weight") {
    LinearStbc c = alamouti();
    std::vector<double> s = {1, 0, 0, 0};
    CHECK(max_entry_diff(encode(c, s, 1.0), c.weights[0]) == 0.0);
}

TEST_CASE("encode rejects a wrong-length symbol vector") {
    std::vector<double> s(6, 0.0);
    CHECK_THROWS_AS(encode(golden(), s, 1.0), ConfigError);
}

TEST_CASE("golden code matches its closed form") {
    std::vector<double> all_ones(8, 1.0);
    CHECK(max_entry_diff(encode(golden(), all_ones, 1.0), golden_direct(all_ones)) < 1e-12);

    Rng rng(7);
    for (int t = 0; t < 20; ++t) {
        std::vector<double> s(8);
        for (double& v : s) v = rng.gauss();
        CHECK(max_entry_diff(encode(golden(), s, 1.0), golden_direct(s)) < 1e-12);
    }
}

TEST_CASE("encode is linear in the symbol vector") {
    Rng rng(8);
    for (const LinearStbc& c : {alamouti(), golden(), ciod4()}) {
        std::vector<double> a(2 * c.k), b(2 * c.k), sum(2 * c.k);
        for (std::size_t i = 0; i < a.size(); ++i) {
            a[i] = rng.gauss();
            b[i] = rng.gauss();
            sum[i] = a[i] + b[i];
        }
        CMat lhs = encode(c, sum, 1.0);
        CMat rhs = encode(c, a, 1.0) + encode(c, b, 1.0);
        CHECK(max_entry_diff(lhs, rhs) < 1e-12);
    }
}

TEST_CASE("alamouti difference gram is a scaled identity") {
    Rng rng(9);
    LinearStbc c = alamouti();
    for (int t = 0; t < 30; ++t) {
        std::vector<double> d(4);
        double n2 = 0;
        for (double& v : d) {
            v = rng.gauss();
            n2 += v * v;
        }
        CMat dx = encode(c, d, 1.0);
        CMat gram = dx * dx.hermitian();
        CHECK(std::abs(gram(0, 0).real() - n2) < 1e-12 * std::max(1.0, n2));
        CHECK(std::abs(gram(1, 1).real() - n2) < 1e-12 * std::max(1.0, n2));
        CHECK(std::abs(gram(0, 1)) < 1e-12);
        CHECK(std::abs(gram(1, 0)) < 1e-12);
    }
}

TEST_CASE("puncturing the golden code to its first pair gives the diagonal design") {
    LinearStbc p = puncture(golden(), {0, 1});
    LinearStbc g = golden_punctured();
    REQUIRE(p.weights.size() == g.weights.size());
    for (std::size_t i = 0; i < p.weights.size(); ++i)
        CHECK(max_entry_diff(p.weights[i], g.weights[i]) == 0.0);
    // off-diagonal weights are gone
    for (const CMat& w : p.weights) {
        CHECK(std::abs(w(0, 1)) == 0.0);
        CHECK(std::abs(w(1, 0)) == 0.0);
    }
    GeneratorMatrix gp = generator_matrix(p);
    CHECK(gp.rank == 4);
    CHECK(gp.g.cols() == 4);
}

TEST_CASE("puncturing with all indices is the identity") {
    LinearStbc c = golden();
    LinearStbc p = puncture(c, {0, 1, 2, 3});
    REQUIRE(p.weights.size() == c.weights.size());
    for (std::size_t i = 0; i < p.weights.size(); ++i)
        CHECK(max_entry_diff(p.weights[i], c.weights[i]) == 0.0);
}

TEST_CASE("puncture validates its index set") {
    CHECK_THROWS_AS(puncture(golden(), {}), ConfigError);
    CHECK_THROWS_AS(puncture(golden(), {4}), ConfigError);
    CHECK_THROWS_AS(puncture(golden(), {1, 1}), ConfigError);
}

TEST_CASE("code rate of a punctured design is |I|/T for independent weights") {
    Rational r1 = code_rate(puncture(golden(), {2}));
    CHECK(r1.num == 1);
    CHECK(r1.den == 2);
    Rational r3 = code_rate(puncture(golden(), {0, 1, 3}));
    CHECK(r3.num == 3);
    CHECK(r3.den == 2);
}

TEST_CASE("hex rebase reproduces the oblique-basis weights") {
    LinearStbc c = golden();
    const std::size_t n = 2 * c.k;
    RMat gl(n, n);
    for (std::size_t p = 0; p < c.k; ++p) {
        gl(2 * p, 2 * p) = 1.0;
        gl(2 * p, 2 * p + 1) = -0.5;
        gl(2 * p + 1, 2 * p + 1) = std::sqrt(3.0) / 2.0;
    }
    LinearStbc hexed = lattice_rebase(c, gl);
    CHECK(hexed.coord_kind == CoordKind::integer);
    for (std::size_t p = 0; p < c.k; ++p) {
        CMat want_i = c.weights[2 * p];
        CMat want_q = (-0.5) * c.weights[2 * p] + (std::sqrt(3.0) / 2.0) * c.weights[2 * p + 1];
        CHECK(max_entry_diff(hexed.weights[2 * p], want_i) < 1e-15);
        CHECK(max_entry_diff(hexed.weights[2 * p + 1], want_q) < 1e-15);
    }
}

TEST_CASE("identity rebase leaves the code unchanged") {
    LinearStbc c = ciod2();
    LinearStbc r = lattice_rebase(c, RMat::identity(4));
    for (std::size_t i = 0; i < c.weights.size(); ++i)
        CHECK(max_entry_diff(r.weights[i], c.weights[i]) == 0.0);
}

TEST_CASE("rebase then encode equals encode with transformed symbols") {
    Rng rng(10);
    LinearStbc c = golden();
    const std::size_t n = 2 * c.k;
    RMat gl(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) gl(i, j) = (i == j ? 1.0 : 0.0) + 0.3 * rng.gauss();
    LinearStbc reb = lattice_rebase(c, gl);
    for (int t = 0; t < 20; ++t) {
        std::vector<double> s(n);
        for (double& v : s) v = rng.gauss();
        CMat lhs = encode(reb, s, 1.0);
        CMat rhs = encode(c, matvec(gl, s), 1.0);
        CHECK(max_entry_diff(lhs, rhs) < 1e-10);
    }
}

TEST_CASE("rebase rejects a singular basis") {
    RMat gl(4, 4);  // zero matrix
    CHECK_THROWS_AS(lattice_rebase(ciod2(), gl), ConfigError);
}

TEST_CASE("scheme M-schedule: r = 0 pins M to 2") {
    SchemeConfig cfg = scheme(alamouti(), 0.0, {10, 20, 30});
    for (double db : cfg.snr_grid_db) CHECK(cfg.m_at(db_to_linear(db)) == 2);
}

TEST_CASE("scheme M-schedule follows round(SNR^(rT/2k))") {
    // alamouti: rT/(2k) = 1/2, so 1000^(1/2) = 31.6 -> 32
    SchemeConfig cfg = scheme(alamouti(), 1.0, {30});
    CHECK(cfg.m_at(1000.0) == 32);
    // golden: rT/(2k) = 1/4, so 1000^(1/4) = 5.62 -> 6
    SchemeConfig cfg2 = scheme(golden(), 1.0, {30});
    CHECK(cfg2.m_at(1000.0) == 6);
}

TEST_CASE("scheme M-schedule is nondecreasing in SNR") {
    SchemeConfig cfg = scheme(golden(), 1.5, {0, 5, 10, 15, 20, 25, 30, 35, 40});
    int prev = 0;
    for (double db : cfg.snr_grid_db) {
        int m = cfg.m_at(db_to_linear(db));
        CHECK(m >= std::max(prev, 2));
        prev = m;
    }
}

TEST_CASE("even-only schedule yields even sizes") {
    SchemeConfig cfg = scheme(golden(), 1.5, {10, 20, 30, 40}, true);
    for (double db : cfg.snr_grid_db) {
        int m = cfg.m_at(db_to_linear(db));
        CHECK(m % 2 == 0);
        CHECK(m >= 2);
    }
}

TEST_CASE("alamouti normalization: mu^2 = T snr / 8 at M = 2") {
    SchemeConfig cfg = scheme(alamouti(), 0.0, {20});
    const double snr = db_to_linear(20);
    const double mu = cfg.mu_at(snr);
    CHECK(mu * mu == doctest::Approx(2.0 * snr / 8.0).epsilon(1e-12));
}

TEST_CASE("energy convention: mean codeword energy is exactly T snr") {
    for (const std::string& name : {"alamouti", "golden", "golden_punctured", "ciod2", "ciod4"}) {
        LinearStbc c = catalog_code(name);
        for (double r : {0.0, 0.5}) {
            SchemeConfig cfg = scheme(c, r, {10, 20, 30});
            for (double db : cfg.snr_grid_db) {
                const double snr = db_to_linear(db);
                const int m = cfg.m_at(snr);
                const double mu = cfg.mu_for(m, snr);
                const double e = mean_codeword_energy(c, m, mu);
                CHECK(e == doctest::Approx(c.t * snr).epsilon(1e-9));
            }
        }
    }
}

TEST_CASE("exact mean energy matches a brute-force average over the code") {
    LinearStbc c = ciod2();
    const int m = 3;  // odd M exercises the nonzero-mean path
    auto sets = coordinate_sets(c, m);
    double acc = 0;
    std::size_t count = 0;
    for_each_vector(sets, 1 << 12, [&](const std::vector<double>& s) {
        CMat x = encode(c, s, 1.0);
        acc += x.frob_norm() * x.frob_norm();
        ++count;
    });
    CHECK(mean_codeword_energy(c, m, 1.0) == doctest::Approx(acc / count).epsilon(1e-10));
}

TEST_CASE("scheme rejects multiplexing gains above the code rate") {
    CHECK_THROWS_AS(scheme(alamouti(), 1.2, {10, 20}), ConfigError);
    CHECK_NOTHROW(scheme(golden(), 1.2, {10, 20}));
    try {
        scheme(alamouti(), 1.2, {10, 20});
    } catch (const ConfigError& e) {
        CHECK(std::string(e.what()).find("code rate") != std::string::npos);
    }
}

TEST_CASE("ciod4 is the rotation-folded form of the interleaved design") {
    // with theta = 0 the folded weights are the raw interleaved ones
    LinearStbc raw = ciod4_with_angle(0.0);
    std::vector<double> s = {1, 0, 0, 0, 0, 0, 0, 0};  // x1I = 1
    CMat x = encode(raw, s, 1.0);
    CHECK(x(0, 0) == cplx(1.0, 0.0));
    CHECK(x(1, 1) == cplx(1.0, 0.0));
    CHECK(std::abs(x(2, 2)) == 0.0);

    // the rotated-QAM alias equals the default construction
    LinearStbc a = ciod4();
    LinearStbc b = ciod4_rotated_qam();
    for (std::size_t i = 0; i < a.weights.size(); ++i)
        CHECK(max_entry_diff(a.weights[i], b.weights[i]) == 0.0);

    // encoding integer pairs through the folded weights equals encoding the
    // rotated complex symbol through the raw weights
    const double th = ciod_rotation_angle();
    LinearStbc folded = ciod4();
    std::vector<double> sp = {1, 2, 0, 0, 0, 0, 0, 0};
    CMat lhs = encode(folded, sp, 1.0);
    const cplx x1 = std::exp(cplx(0, th)) * cplx(1.0, 2.0);
    std::vector<double> sraw = {x1.real(), x1.imag(), 0, 0, 0, 0, 0, 0};
    CMat rhs = encode(raw, sraw, 1.0);
    CHECK(max_entry_diff(lhs, rhs) < 1e-12);
}

TEST_CASE("catalog lists the built-in designs and external metadata rows") {
    bool saw_ciod4 = false, saw_external = false;
    for (const CatalogEntry& e : catalog()) {
        if (e.name == "ciod4") {
            saw_ciod4 = true;
            CHECK_FALSE(e.external);
            CHECK(e.rate == doctest::Approx(1.0));
        }
        if (e.external) {
            saw_external = true;
            CHECK_FALSE(e.code.has_value());
        }
    }
    CHECK(saw_ciod4);
    CHECK(saw_external);
}

TEST_CASE("unknown catalog names produce an error listing valid names") {
    CHECK_THROWS_AS(catalog_code("nosuch"), ConfigError);
    try {
        catalog_code("nosuch");
    } catch (const ConfigError& e) {
        CHECK(std::string(e.what()).find("golden") != std::string::npos);
    }
    CHECK_THROWS_AS(catalog_code("perfect_3"), ConfigError);  // metadata only
}
