#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "bq/defaults.hpp"
#include "bq/io.hpp"
#include "bq/square.hpp"
#include "bq/wannier.hpp"
#include "doctest.h"

namespace {

std::string tmp_path(const std::string& name) {
    return std::string("io_test_") + name;
}

std::string slurp(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    std::stringstream ss;
    ss << is.rdbuf();
    return ss.str();
}

}  // namespace

TEST_CASE("fnv1a reference values and file hashing") {
    CHECK(bq::io::fnv1a(std::string("")) == 0xcbf29ce484222325ULL);
    CHECK(bq::io::fnv1a(std::string("a")) == 0xaf63dc4c8601ec8cULL);
    CHECK(bq::io::hash_hex(0xdeadbeefULL) == "00000000deadbeef");

    const auto p = tmp_path("hash.bin");
    std::ofstream(p, std::ios::binary) << "a";
    CHECK(bq::io::hash_file(p) == 0xaf63dc4c8601ec8cULL);
    std::remove(p.c_str());
}

TEST_CASE("cache directory honors BQ_CACHE_DIR and path names are stable") {
    setenv("BQ_CACHE_DIR", "io_test_cache", 1);
    CHECK(bq::io::cache_dir() == "io_test_cache");
    const auto p1 = bq::io::spectrum_cache_path(5.5, 0.55, 1300);
    CHECK(p1 == bq::io::spectrum_cache_path(5.5, 0.55, 1300));
    CHECK(p1 != bq::io::spectrum_cache_path(5.5, 0.56, 1300));
    CHECK(p1.rfind("io_test_cache/spec_", 0) == 0);
    CHECK(bq::io::wannier_cache_path(0.159) != bq::io::wannier_cache_path(0.2));
    unsetenv("BQ_CACHE_DIR");
}

TEST_CASE("spectrum cache round-trips bit-exactly") {
    auto sq = bq::SquareSpectrum::solve(5.5, 0.0, 0.0, 8);
    auto spec = sq.sample(bq::Grid2D{{0.0, 5.5, 40}, {0.0, 5.5, 40}}, 8);
    spec.b = 2.75;
    spec.a = -1.0;

    const auto p = tmp_path("spec.bqspec");
    bq::io::save_spectrum(p, spec);
    auto back = bq::io::load_spectrum(p);
    CHECK(back.b == spec.b);
    CHECK(back.a == spec.a);
    CHECK(back.grid == spec.grid);
    REQUIRE(back.energies == spec.energies);
    REQUIRE(back.fields == spec.fields);

    // identical rewrite, identical bytes
    const auto h = bq::io::hash_file(p);
    bq::io::save_spectrum(p, spec);
    CHECK(bq::io::hash_file(p) == h);
    std::remove(p.c_str());
    CHECK_THROWS(bq::io::load_spectrum(p));
}

TEST_CASE("wannier cache round-trips and revalidates") {
    bq::WannierLatticeParams lx{1.0, bq::kTwoPi, bq::defaults::kZeta, 0.0, -2, 2, -1, 1};
    bq::WannierLatticeParams ly{1.0, bq::kTwoPi, bq::defaults::kZeta, -0.5, 1, 4, -1, 1};
    auto basis = bq::WannierBasis2D::build(bq::Wannier1D::build(lx, {-3.3, 3.3, 90}),
                                           bq::Wannier1D::build(ly, {0.0, 4.4, 70}));
    const auto p = tmp_path("basis.bqwan");
    bq::io::save_wannier(p, basis);
    auto back = bq::io::load_wannier(p);
    CHECK(back.size() == basis.size());
    CHECK(back.config_key() == basis.config_key());
    CHECK(back.bx().gram_residual() == doctest::Approx(basis.bx().gram_residual()).epsilon(1e-12));
    for (int f = 0; f < basis.bx().n_funcs(); ++f)
        for (int i = 0; i < basis.bx().grid().n; ++i) {
            CHECK(back.bx().re(f)[i] == basis.bx().re(f)[i]);
            CHECK(back.bx().im(f)[i] == basis.bx().im(f)[i]);
        }
    std::remove(p.c_str());
}

TEST_CASE("manifest hashing is canonical; writes are append-only") {
    bq::io::RunManifest m;
    m.tool_version = "test";
    m.seed = 7;
    m.config = {{"b", "5.5"}, {"a", "0.55"}};
    m.cache_hashes = {{"x.bqspec", "00ff"}};

    bq::io::RunManifest same;
    same.tool_version = "test";
    same.seed = 7;
    same.cache_hashes = {{"x.bqspec", "00ff"}};
    same.config = {{"a", "0.55"}, {"b", "5.5"}};  // insertion order must not matter
    CHECK(m.hash() == same.hash());

    const auto p = tmp_path("manifest.json");
    m.write(p);
    const auto bytes = slurp(p);
    m.write(p);  // identical rerun is a no-op
    CHECK(slurp(p) == bytes);

    same.seed = 8;
    CHECK_THROWS(same.write(p));  // different content must not clobber
    CHECK(slurp(p) == bytes);
    std::remove(p.c_str());
}

TEST_CASE("csv output is deterministic and stamped with the manifest hash") {
    const std::vector<std::vector<double>> rows{{1.0, 2.5}, {3.0, 1.0 / 3.0}};
    const auto p1 = tmp_path("a.csv"), p2 = tmp_path("b.csv");
    bq::io::write_csv(p1, "x,y", rows, 0xabcdULL);
    bq::io::write_csv(p2, "x,y", rows, 0xabcdULL);
    const auto bytes = slurp(p1);
    CHECK(bytes == slurp(p2));
    CHECK(bytes.find("x,y") != std::string::npos);
    CHECK(bytes.find("000000000000abcd") != std::string::npos);
    std::remove(p1.c_str());
    std::remove(p2.c_str());
}

TEST_CASE("file locks exclude and release") {
    const auto p = tmp_path("locked");
    {
        bq::io::FileLock lock(p);
        std::ifstream probe(p + ".lock");
        CHECK(probe.good());
    }
    std::ifstream probe(p + ".lock");
    CHECK_FALSE(probe.good());  // released on destruction
    bq::io::FileLock again(p);  // and can be re-taken
}

TEST_CASE("svg writers emit well-formed files") {
    const auto pc = tmp_path("chart.svg"), ph = tmp_path("heat.svg");
    bq::io::write_svg_chart(pc, {{{0.0, 1.0, 2.0}, {0.5, 0.1, 0.9}, "#112233", "series"}},
                            "t", "s", "title");
    bq::io::write_svg_heatmap(ph, std::vector<double>{0.0, 0.5, 1.0, 0.25}, 2, 2, "heat");
    for (const auto& p : {pc, ph}) {
        const auto bytes = slurp(p);
        CHECK(bytes.rfind("<svg", 0) == 0);
        CHECK(bytes.find("</svg>") != std::string::npos);
        std::remove(p.c_str());
    }
}
