#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <complex>
#include <random>
#include <vector>

#include "bq/kernels.hpp"
#include "doctest.h"

namespace {

std::vector<double> random_vec(std::size_t n, std::uint64_t seed) {
    std::mt19937_64 eng(seed);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::vector<double> v(n);
    for (auto& x : v) x = u(eng);
    return v;
}

// lengths exercising every remainder path of the vector loops
const std::size_t kLens[] = {0, 1, 2, 3, 4, 5, 7, 8, 15, 16, 17, 33, 1000, 1023};

}  // namespace

TEST_CASE("active kernels match the scalar reference") {
    const auto& act = bq::kern::active();
    const auto& ref = bq::kern::scalar();
    INFO("active variant: ", bq::kern::active_name());

    for (std::size_t n : kLens) {
        const auto a = random_vec(n, 11 + n), b = random_vec(n, 23 + n),
                   c = random_vec(n, 37 + n), d = random_vec(n, 53 + n);

        CHECK(act.dot(a.data(), b.data(), n) ==
              doctest::Approx(ref.dot(a.data(), b.data(), n)).epsilon(1e-13));
        CHECK(act.dot3(a.data(), b.data(), c.data(), n) ==
              doctest::Approx(ref.dot3(a.data(), b.data(), c.data(), n)).epsilon(1e-13));

        const auto za = act.cdotc(a.data(), b.data(), c.data(), d.data(), n);
        const auto zr = ref.cdotc(a.data(), b.data(), c.data(), d.data(), n);
        CHECK(std::abs(za - zr) <= 1e-13 * (1.0 + std::abs(zr)));

        CHECK(act.abs2_cdot(a.data(), b.data(), c.data(), d.data(), n) ==
              doctest::Approx(ref.abs2_cdot(a.data(), b.data(), c.data(), d.data(), n))
                  .epsilon(1e-12));

        auto fr1 = a, fi1 = b, fr2 = a, fi2 = b;
        act.axpy_creal(fr1.data(), fi1.data(), c.data(), 0.7, -1.3, n);
        ref.axpy_creal(fr2.data(), fi2.data(), c.data(), 0.7, -1.3, n);
        for (std::size_t i = 0; i < n; ++i) {
            CHECK(fr1[i] == doctest::Approx(fr2[i]).epsilon(1e-14));
            CHECK(fi1[i] == doctest::Approx(fi2[i]).epsilon(1e-14));
        }
    }
}

TEST_CASE("scalar kernels agree with naive formulas") {
    const auto& ref = bq::kern::scalar();
    const std::size_t n = 257;
    const auto a = random_vec(n, 1), b = random_vec(n, 2), c = random_vec(n, 3),
               d = random_vec(n, 4);

    double dot = 0.0, dot3 = 0.0;
    std::complex<double> cd{0.0, 0.0}, plain{0.0, 0.0};
    for (std::size_t i = 0; i < n; ++i) {
        dot += a[i] * b[i];
        dot3 += a[i] * b[i] * c[i];
        cd += std::conj(std::complex<double>(a[i], b[i])) * std::complex<double>(c[i], d[i]);
        plain += std::complex<double>(a[i], b[i]) * std::complex<double>(c[i], d[i]);
    }
    CHECK(ref.dot(a.data(), b.data(), n) == doctest::Approx(dot).epsilon(1e-13));
    CHECK(ref.dot3(a.data(), b.data(), c.data(), n) == doctest::Approx(dot3).epsilon(1e-13));
    CHECK(std::abs(ref.cdotc(a.data(), b.data(), c.data(), d.data(), n) - cd) < 1e-12);
    CHECK(ref.abs2_cdot(a.data(), b.data(), c.data(), d.data(), n) ==
          doctest::Approx(std::norm(plain)).epsilon(1e-12));
}
