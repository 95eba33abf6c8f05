#include <doctest.h>

#include <complex>
#include <random>

#include "rectfree/errors.hpp"
#include "rectfree/power_series.hpp"

using namespace rectfree;
using S = PowerSeries<double>;

namespace {

S geometric(int order)
{
    S f(order);
    for (int k = 0; k <= order; ++k)
        f[k] = 1.0;
    return f;
}

S random_series(std::mt19937_64& rng, int order, bool zero_constant)
{
    std::normal_distribution<double> n;
    S f(order);
    for (int k = 0; k <= order; ++k)
        f[k] = n(rng);
    if (zero_constant)
        f[0] = 0.0;
    return f;
}

} // namespace

TEST_CASE("construction and evaluation")
{
    const S f(4, {1.0, 2.0, 3.0});
    CHECK(f.order() == 4);
    CHECK(f[3] == 0.0);
    CHECK(f(2.0) == doctest::Approx(1 + 4 + 12));
    CHECK(S::identity(3)(0.7) == doctest::Approx(0.7));
    CHECK(S::constant(3, 5.0)(10.0) == 5.0);
    CHECK_THROWS_AS(S(-1), InvalidInput);
    CHECK(f.truncated(1).order() == 1);
    CHECK(f.truncated(1)[1] == 2.0);
    CHECK(f.truncated(6)[5] == 0.0);
}

TEST_CASE("products truncate at the smaller order")
{
    const S a(6, {1.0, 1.0});
    const S b(6, {1.0, -1.0});
    const S p = a * b;
    CHECK(p[0] == 1.0);
    CHECK(p[1] == 0.0);
    CHECK(p[2] == -1.0);
    for (int k = 3; k <= 6; ++k)
        CHECK(p[k] == 0.0);
    CHECK((geometric(8) * S(3, {1.0, -1.0})).order() == 3);
    const S d = a - a;
    for (int k = 0; k <= 6; ++k)
        CHECK(d[k] == 0.0);
}

TEST_CASE("reciprocal")
{
    const S r = series_reciprocal(S(8, {1.0, -1.0}));
    for (int k = 0; k <= 8; ++k)
        CHECK(r[k] == doctest::Approx(1.0));
    CHECK_THROWS_AS(series_reciprocal(S::identity(4)), InvalidInput);

    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 20; ++trial) {
        S f = random_series(rng, 10, false);
        f[0] = 1.0 + std::abs(f[0]);
        const S one = f * series_reciprocal(f);
        CHECK(one[0] == doctest::Approx(1.0));
        for (int k = 1; k <= 10; ++k)
            CHECK(std::abs(one[k]) < 1e-9);
    }
}

TEST_CASE("composition")
{
    std::mt19937_64 rng(5);
    const S f = random_series(rng, 9, false);
    const S id = S::identity(9);
    const S fi = series_compose(f, id);
    for (int k = 0; k <= 9; ++k)
        CHECK(fi[k] == doctest::Approx(f[k]));

    // z / (1 - z) at z^2 is z^2 + z^4 + ...
    S g = geometric(10);
    g[0] = 0.0;
    const S sq = series_compose(g, S(10, {0.0, 0.0, 1.0}));
    for (int k = 0; k <= 10; ++k)
        CHECK(sq[k] == doctest::Approx(k > 0 && k % 2 == 0 ? 1.0 : 0.0));

    CHECK_THROWS_AS(series_compose(f, S(9, {1.0, 1.0})), InvalidInput);
}

TEST_CASE("reversion examples")
{
    // z / (1 - z) inverts to z / (1 + z)
    S g = geometric(10);
    g[0] = 0.0;
    const S inv = series_reversion(g);
    for (int k = 1; k <= 10; ++k)
        CHECK(inv[k] == doctest::Approx(k % 2 ? 1.0 : -1.0));

    // z - z^2 inverts to the Catalan generating function
    const S cat = series_reversion(S(8, {0.0, 1.0, -1.0}));
    const double catalan[] = {0, 1, 1, 2, 5, 14, 42, 132, 429};
    for (int k = 0; k <= 8; ++k)
        CHECK(cat[k] == doctest::Approx(catalan[k]));

    CHECK_THROWS_AS(series_reversion(S(4, {1.0, 1.0})), InvalidInput);
    CHECK_THROWS_AS(series_reversion(S(4, {0.0, 0.0, 1.0})), InvalidInput);
    CHECK_THROWS_AS(series_reversion(S(0)), InvalidInput);
}

TEST_CASE("reversion is a two-sided inverse")
{
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 20; ++trial) {
        S f = random_series(rng, 10, true);
        f[1] = 0.5 + std::abs(f[1]);
        const S g = series_reversion(f);
        const S fg = series_compose(f, g), gf = series_compose(g, f);
        for (int k = 0; k <= 10; ++k) {
            CHECK(fg[k] == doctest::Approx(k == 1 ? 1.0 : 0.0).epsilon(1e-9).scale(1.0));
            CHECK(gf[k] == doctest::Approx(k == 1 ? 1.0 : 0.0).epsilon(1e-9).scale(1.0));
        }
    }
}

TEST_CASE("complex scalar")
{
    using C = std::complex<double>;
    PowerSeries<C> f(4, {C(0), C(0, 1)});
    const auto g = series_reversion(f);
    CHECK(std::abs(g[1] - C(0, -1)) < 1e-15);
    CHECK(std::abs(f(C(2, 0)) - C(0, 2)) < 1e-15);
}
