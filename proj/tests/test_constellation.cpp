#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "stbclab/constellation.hpp"

using namespace stbclab;

TEST_CASE("pam point sets for small M") {
    CHECK(pam(2).points == std::vector<double>({-1, 1}));
    CHECK(pam(4).points == std::vector<double>({-3, -1, 1, 3}));
    // odd M: floor(-3/2) = -2, so the set leans negative
    CHECK(pam(3).points == std::vector<double>({-3, -1, 1}));
    CHECK(pam(1).points == std::vector<double>({-1}));
}

TEST_CASE("pam rejects M = 0") { CHECK_THROWS_AS(pam(0), ConfigError); }

TEST_CASE("pam moments: zero mean for even M, variance (M^2-1)/3") {
    for (int m : {2, 4, 8, 16}) {
        Pam p = pam(m);
        CHECK(pam_mean(p) == doctest::Approx(0.0));
        double second = 0;
        for (double v : p.points) second += v * v;
        second /= m;
        CHECK(second == doctest::Approx((m * m - 1) / 3.0));
    }
}

TEST_CASE("pam spacing is exactly 2") {
    for (int m : {2, 3, 4, 5, 8}) {
        Pam p = pam(m);
        for (std::size_t i = 1; i < p.points.size(); ++i)
            CHECK(p.points[i] - p.points[i - 1] == 2.0);
    }
}

TEST_CASE("qam(2) is the unit QPSK square") {
    Complex2D c = qam(2);
    REQUIRE(c.points.size() == 4);
    for (const cplx& p : c.points) {
        CHECK(std::abs(p.real()) == 1.0);
        CHECK(std::abs(p.imag()) == 1.0);
    }
}

TEST_CASE("qam point count is M^2") {
    for (int m : {2, 3, 4}) CHECK(qam(m).points.size() == static_cast<std::size_t>(m) * m);
}

TEST_CASE("hex(2) is {+-1 +- omega}") {
    Complex2D c = hex(2);
    const cplx omega = std::exp(cplx(0.0, 2.0 * std::numbers::pi / 3.0));
    REQUIRE(c.points.size() == 4);
    bool found[2][2] = {};
    for (const cplx& p : c.points)
        for (int a = 0; a < 2; ++a)
            for (int b = 0; b < 2; ++b) {
                cplx want = cplx(a ? 1.0 : -1.0, 0.0) + omega * (b ? 1.0 : -1.0);
                if (std::abs(p - want) < 1e-12) found[a][b] = true;
            }
    for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b) CHECK(found[a][b]);
}

TEST_CASE("hex minimum distance is 2 for all M") {
    for (int m : {2, 3, 4}) CHECK(min_pairwise_distance(hex(m)) == doctest::Approx(2.0));
}

TEST_CASE("rotation preserves pairwise distances") {
    Complex2D base = qam(2);
    Complex2D rot = rotate(base, 0.5 * std::atan(2.0));
    CHECK(min_pairwise_distance(rot) == doctest::Approx(min_pairwise_distance(base)).epsilon(1e-12));
    for (std::size_t i = 0; i < base.points.size(); ++i)
        for (std::size_t j = i + 1; j < base.points.size(); ++j) {
            double d0 = std::abs(base.points[i] - base.points[j]);
            double d1 = std::abs(rot.points[i] - rot.points[j]);
            CHECK(std::abs(d0 - d1) < 1e-12);
        }
}

TEST_CASE("vector enumeration is lexicographic and exhaustive") {
    std::vector<std::vector<double>> sets = {{-1, 1}, {-1, 1}};
    std::vector<std::vector<double>> seen;
    for_each_vector(sets, 100, [&](const std::vector<double>& v) { seen.push_back(v); });
    REQUIRE(seen.size() == 4);
    CHECK(seen[0] == std::vector<double>({-1, -1}));
    CHECK(seen[1] == std::vector<double>({-1, 1}));
    CHECK(seen[2] == std::vector<double>({1, -1}));
    CHECK(seen[3] == std::vector<double>({1, 1}));
}

TEST_CASE("vector enumeration count for 4 pam(4) coordinates") {
    std::vector<std::vector<double>> sets(4, pam(4).points);
    std::size_t n = 0;
    for_each_vector(sets, 1000, [&](const std::vector<double>&) { ++n; });
    CHECK(n == 256);
}

TEST_CASE("vector enumeration rejects empty products and over-cap requests") {
    CHECK_THROWS_AS(vector_count({}, 10), ConfigError);
    std::vector<std::vector<double>> sets(4, pam(4).points);
    CHECK_THROWS_AS(vector_count(sets, 255), CapExceededError);
    try {
        vector_count(sets, 255);
    } catch (const CapExceededError& e) {
        CHECK(std::string(e.what()).find("255") != std::string::npos);
    }
}

TEST_CASE("mixed radix odometer seek agrees with sequential stepping") {
    MixedRadix a({3, 2, 4});
    CHECK(a.total() == 24);
    MixedRadix b({3, 2, 4});
    for (std::uint64_t i = 0; i < a.total(); ++i) {
        b.seek(i);
        CHECK(a.digits() == b.digits());
        a.next();
    }
}
