#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "stbclab/io.hpp"

using namespace stbclab;

namespace {

std::filesystem::path temp_file(const std::string& name) {
    return std::filesystem::temp_directory_path() / ("stbclab_io_" + name);
}

}  // namespace

TEST_CASE("code serialization round-trips every catalog design") {
    for (const CatalogEntry& e : catalog()) {
        if (!e.code) continue;
        json j = to_json(*e.code);
        LinearStbc back = stbc_from_json(j);
        CHECK(back.name == e.code->name);
        CHECK(back.nt == e.code->nt);
        CHECK(back.t == e.code->t);
        CHECK(back.k == e.code->k);
        REQUIRE(back.weights.size() == e.code->weights.size());
        for (std::size_t w = 0; w < back.weights.size(); ++w)
            for (std::size_t i = 0; i < back.weights[w].entries().size(); ++i)
                CHECK(back.weights[w].entries()[i] == e.code->weights[w].entries()[i]);
        // a second trip is bit-stable
        CHECK(to_json(back) == j);
    }
}

TEST_CASE("json rejects malformed code documents") {
    json j = to_json(alamouti());
    j["coord_kind"] = "whatever";
    CHECK_THROWS_AS(stbc_from_json(j), ConfigError);
    json j2 = to_json(alamouti());
    j2["weights"][0]["re"] = json::array({1.0});
    CHECK_THROWS_AS(stbc_from_json(j2), ConfigError);
}

TEST_CASE("csv bodies are deterministic and parseable") {
    SimStats s;
    PointStats p;
    p.snr_db = 14;
    p.trials = 1000;
    p.errors = 31;
    p.pe = 0.031;
    p.ci_lo = 0.02;
    p.ci_hi = 0.04;
    s.points.push_back(p);
    p.snr_db = 16;
    p.errors = 11;
    p.pe = 0.011;
    s.points.push_back(p);

    const std::string body = pe_csv(s);
    CHECK(body == pe_csv(s));
    CHECK(body.find("snr_db,trials,errors,pe,ci_lo,ci_hi\n") == 0);

    auto path = temp_file("pe.csv");
    write_text_atomic(path, body);
    auto rows = read_snr_pe_csv(path);
    REQUIRE(rows.size() == 2);
    CHECK(rows[0].first == 14.0);
    CHECK(rows[0].second == 0.031);
    std::filesystem::remove(path);
}

TEST_CASE("atomic writes leave no temporary behind") {
    auto path = temp_file("atomic.txt");
    write_text_atomic(path, "hello\n");
    CHECK(std::filesystem::exists(path));
    CHECK_FALSE(std::filesystem::exists(path.string() + ".tmp"));
    std::ifstream in(path);
    std::string line;
    std::getline(in, line);
    CHECK(line == "hello");
    std::filesystem::remove(path);
}

TEST_CASE("json documents keep stable key order") {
    MinDetReport r;
    r.code = "alamouti";
    r.value = 16.0;
    r.argmin = {2, 0, 0, 0};
    r.constellation_m = 2;
    r.evaluated = 40;
    const std::string a = to_json(r).dump();
    const std::string b = to_json(r).dump();
    CHECK(a == b);
    CHECK(a.find("\"argmin\"") < a.find("\"code\""));  // alphabetical
}
