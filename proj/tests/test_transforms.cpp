#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "rectfree/errors.hpp"
#include "rectfree/measure.hpp"
#include "rectfree/transforms.hpp"

using namespace rectfree;

namespace {

const DiscreteMeasure delta1 = DiscreteMeasure::dirac(1.0);
const DiscreteMeasure delta0 = DiscreteMeasure::dirac(0.0);

DiscreteMeasure random_measure(std::mt19937_64& rng)
{
    std::uniform_int_distribution<int> count(1, 6);
    std::uniform_real_distribution<double> atom(-1.2, 1.2), weight(0.05, 1.0);
    std::vector<double> a(static_cast<std::size_t>(count(rng))), w(a.size());
    double total = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        a[i] = atom(rng);
        total += w[i] = weight(rng);
    }
    for (double& x : w)
        x /= total;
    return DiscreteMeasure(a, w);
}

double c_delta1_square(double z) { return (std::sqrt(1 + 4 * z) - 1) / 2; }

DiscreteMeasure perturbed_three_atoms(int n, std::uint64_t seed)
{
    const double vals[] = {0.3, 0.7, 1.0};
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> jitter(-1.0, 1.0);
    std::vector<double> pts(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i)
        pts[static_cast<std::size_t>(i)] = vals[(3 * i) / n] + jitter(rng) / n;
    return DiscreteMeasure::uniform(pts);
}

} // namespace

TEST_CASE("context validation")
{
    CHECK_THROWS_AS(TransformContext(delta1, -0.1), InvalidInput);
    CHECK_THROWS_AS(TransformContext(delta1, 1.1), InvalidInput);
    CHECK_THROWS_AS(TransformContext(delta1, 0.5, 3), InvalidInput);
    const TransformContext ctx(DiscreteMeasure::dirac(-2.0), 0.5, 2);
    CHECK(ctx.K() == 2.0);
    CHECK(ctx.h_domain_end() == doctest::Approx(0.25));
    CHECK(std::isinf(ctx.c_domain_end()));
    CHECK(ctx.theta_domain_end() == doctest::Approx(1.0));
    const TransformContext zero(delta0, 0.5);
    CHECK(zero.degenerate());
    CHECK(std::isinf(zero.theta_domain_end()));
}

TEST_CASE("T and its inverse")
{
    CHECK(T_lambda(0.5, 0.0) == 1.0);
    CHECK(T_lambda(1.0, 1.0) == 4.0);
    CHECK(T_lambda(0.0, 3.0) == 4.0);
    for (double lambda : {0.0, 1e-9, 0.25, 0.5, 1.0})
        for (double x = -1.0; x <= 20.0; x += 0.37) {
            const double y = T_lambda(lambda, x);
            CHECK(T_lambda_inv(lambda, y) == doctest::Approx(x).epsilon(1e-13).scale(1.0));
        }
    CHECK(T_lambda_inv(0.3, 0.0) == -1.0);
    CHECK(T_lambda_inv(1.0, 1.0) == 0.0);
    CHECK_THROWS_AS(T_lambda_inv(0.5, -0.1), DomainError);
}

TEST_CASE("H examples")
{
    const TransformContext c1(delta1, 1.0);
    CHECK(H_lambda(c1, 0.5) == doctest::Approx(2.0));
    for (double z = 0; z < 0.95; z += 0.05)
        CHECK(H_lambda(c1, z) == doctest::Approx(z / ((1 - z) * (1 - z))));
    const TransformContext c0(delta0, 0.3);
    CHECK(H_lambda(c0, 7.0) == 7.0);
    CHECK(H_inverse(c0, 7.0) == 7.0);
    CHECK_THROWS_AS(H_lambda(c1, 1.0), DomainError);
    CHECK_THROWS_AS(H_lambda(c1, -0.1), DomainError);
    CHECK_THROWS_AS(H_inverse(c1, -1.0), DomainError);
}

TEST_CASE("H is an increasing diffeomorphism onto the C-domain")
{
    std::mt19937_64 rng(21);
    for (int trial = 0; trial < 30; ++trial) {
        const auto mu = random_measure(rng);
        for (double lambda : {0.0, 0.3, 1.0}) {
            const TransformContext ctx(mu, lambda);
            const double end = ctx.h_domain_end();
            CHECK(H_lambda(ctx, 0.0) == 0.0);
            CHECK(H_lambda_derivative(ctx, 0.0) == doctest::Approx(1.0));
            double prev = 0.0;
            for (int i = 1; i < 40; ++i) {
                const double z = end * i / 40.0;
                const double h = H_lambda(ctx, z);
                CHECK(h > prev);
                prev = h;
                const double dz = 1e-6 * end;
                const double fd = (H_lambda(ctx, z + dz) - H_lambda(ctx, z - dz)) / (2 * dz);
                CHECK(H_lambda_derivative(ctx, z) == doctest::Approx(fd).epsilon(1e-5));
                CHECK(H_inverse(ctx, h) == doctest::Approx(z).epsilon(1e-12));
            }
            CHECK(H_lambda(ctx, std::nextafter(end, 0.0)) > 1e6);
        }
    }
}

TEST_CASE("C examples")
{
    const TransformContext c1(delta1, 1.0);
    CHECK(rect_R_C(c1, 0.0) == 0.0);
    CHECK(rect_R_C(c1, 2.0) == doctest::Approx(1.0));
    for (double z = 0.01; z < 50; z *= 1.7)
        CHECK(rect_R_C(c1, z) == doctest::Approx(c_delta1_square(z)).epsilon(1e-13));
    const TransformContext l0(delta1, 0.0);
    for (double z = 0.0; z < 30; z += 0.7)
        CHECK(rect_R_C(l0, z) == doctest::Approx(z).epsilon(1e-13));
    const TransformContext zero(delta0, 0.5);
    CHECK(rect_R_C(zero, 3.0) == 0.0);
    CHECK_THROWS_AS(rect_R_C(c1, -0.5), DomainError);
}

TEST_CASE("C scales with the measure")
{
    // C_{s mu}(z) = C_mu(s^2 z)
    std::mt19937_64 rng(8);
    for (int trial = 0; trial < 10; ++trial) {
        const auto mu = random_measure(rng);
        const double s = 1.7;
        std::vector<double> atoms(mu.atoms().data(), mu.atoms().data() + mu.size());
        for (double& a : atoms)
            a *= s;
        const DiscreteMeasure scaled(atoms, std::vector<double>(mu.weights().data(), mu.weights().data() + mu.size()));
        for (double lambda : {0.0, 0.6}) {
            const TransformContext a(mu, lambda), b(scaled, lambda);
            for (double z : {0.01, 0.1, 0.5, 2.0})
                CHECK(rect_R_C(b, z) == doctest::Approx(rect_R_C(a, s * s * z)).epsilon(1e-11));
        }
    }
}

TEST_CASE("gamma fixed point")
{
    const TransformContext c1(delta1, 1.0);
    CHECK(gamma_fixed_point(c1, 0.0) == 0.0);
    CHECK(gamma_fixed_point(c1, std::sqrt(2.0)) == doctest::Approx(1.0).epsilon(1e-13));
    CHECK(gamma_fixed_point(c1, 0.5) == doctest::Approx(0.20710678118654752).epsilon(1e-12));
    CHECK(gamma_fixed_point(TransformContext(delta0, 0.5), 3.0) == 0.0);
    CHECK_THROWS_AS(gamma_fixed_point(c1, NAN), DomainError);

    std::mt19937_64 rng(4);
    for (int trial = 0; trial < 30; ++trial) {
        const auto mu = random_measure(rng);
        for (double lambda : {0.0, 0.1, 0.5, 1.0}) {
            const TransformContext ctx(mu, lambda);
            for (double frac : {0.05, 0.3, 0.7, 0.99, 1.5, 4.0}) {
                const double theta = frac / ctx.K();
                const double g = gamma_fixed_point(ctx, theta);
                CHECK(g == doctest::Approx(rect_R_C(ctx, theta * theta)).epsilon(1e-10).scale(1e-3));
                CHECK(gamma_fixed_point(ctx, -theta) == g);
            }
        }
    }
}

TEST_CASE("classical R")
{
    CHECK(classical_R(delta0, 0.4) == 0.0);
    CHECK(classical_R(DiscreteMeasure::dirac(2.5), 0.7) == doctest::Approx(2.5));
    const double pm[] = {-1.0, 1.0};
    const auto bern = DiscreteMeasure::uniform(pm);
    CHECK(classical_R(bern, 0.5) == doctest::Approx(std::sqrt(2.0) - 1));
    for (double t = -3; t <= 3; t += 0.25) {
        const double expect = t == 0 ? 0.0 : (std::sqrt(1 + 4 * t * t) - 1) / (2 * t);
        CHECK(classical_R(bern, t) == doctest::Approx(expect).epsilon(1e-12).scale(1e-12));
    }
    std::mt19937_64 rng(9);
    for (int trial = 0; trial < 10; ++trial) {
        const auto mu = random_measure(rng);
        CHECK(classical_R(mu, 0.0) == doctest::Approx(moment(mu, 1)));
        // small-t slope is the variance
        const double var = moment(mu, 2) - moment(mu, 1) * moment(mu, 1);
        const double h = 1e-5;
        CHECK((classical_R(mu, h) - classical_R(mu, -h)) / (2 * h) == doctest::Approx(var).epsilon(1e-5));
    }
}

TEST_CASE("limit integral")
{
    const TransformContext c1(delta1, 1.0, 1), c2(delta1, 1.0, 2);
    CHECK(limit_integral_I(c1, 0.5) == doctest::Approx(0.11299357795674937).epsilon(1e-9));
    CHECK(limit_integral_I(c2, 0.5) == doctest::Approx(0.0606928746909751245).epsilon(1e-9));
    CHECK(closed_form_I(c1, 0.5) == doctest::Approx(0.11299357795674937).epsilon(1e-12));
    CHECK(closed_form_I(c2, 0.5) == doctest::Approx(0.0606928746909751245).epsilon(1e-12));
    CHECK(limit_integral_I(c1, 0.0) == 0.0);
    CHECK(closed_form_I(c1, 0.0) == 0.0);
    const TransformContext l0(delta1, 0.0);
    CHECK(closed_form_I(l0, 0.5) == doctest::Approx(0.125).epsilon(1e-14));
    CHECK(limit_integral_I(l0, 0.5) == doctest::Approx(0.125).epsilon(1e-9));
    CHECK(limit_integral_I(TransformContext(delta0, 0.5), 10.0) == 0.0);
    CHECK(closed_form_I(TransformContext(delta0, 0.5, 2), 10.0) == 0.0);
    CHECK_THROWS_AS(limit_integral_I(c1, 1.0), DomainError);
    CHECK_THROWS_AS(closed_form_I(c2, -2.0), DomainError);
    CHECK_NOTHROW(limit_integral_I(c2, 1.5));
}

TEST_CASE("quadrature agrees with the closed form")
{
    std::mt19937_64 rng(13);
    for (int trial = 0; trial < 15; ++trial) {
        const auto mu = random_measure(rng);
        for (double lambda : {0.0, 0.2, 0.5, 1.0})
            for (int beta : {1, 2}) {
                const TransformContext ctx(mu, lambda, beta);
                for (double frac : {0.1, 0.5, 0.9}) {
                    const double theta = frac * ctx.theta_domain_end();
                    const double q = limit_integral_I(ctx, theta);
                    CHECK(std::abs(q - closed_form_I(ctx, theta)) < 1e-8);
                    CHECK(limit_integral_I(ctx, -theta) == q);
                }
            }
    }
}

TEST_CASE("derivative of the limit")
{
    std::mt19937_64 rng(17);
    for (int trial = 0; trial < 10; ++trial) {
        const auto mu = random_measure(rng);
        for (int beta : {1, 2}) {
            const TransformContext ctx(mu, 0.4, beta);
            for (double frac : {0.2, 0.6}) {
                const double theta = frac * ctx.theta_domain_end();
                const double h = 1e-4 * ctx.theta_domain_end();
                const double fd = (closed_form_I(ctx, theta + h) - closed_form_I(ctx, theta - h)) / (2 * h);
                const double t = theta / beta;
                CHECK(fd == doctest::Approx(rect_R_C(ctx, t * t) / t).epsilon(1e-5));
            }
        }
    }
}

TEST_CASE("corollary values")
{
    const TransformContext c1(delta1, 1.0);
    for (double t : {0.1, 0.5, 0.9}) {
        const auto [lhs, rhs] = corollary_check_values(c1, t);
        CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
        CHECK(lhs == doctest::Approx(c_delta1_square(t * t)).epsilon(1e-12));
    }
    std::mt19937_64 rng(19);
    for (int trial = 0; trial < 20; ++trial) {
        const auto mu = random_measure(rng);
        for (double lambda : {0.0, 1.0}) {
            const TransformContext ctx(mu, lambda);
            for (double t : {0.05, 0.3, 0.8}) {
                const double tt = t / ctx.K();
                const auto [lhs, rhs] = corollary_check_values(ctx, tt);
                CHECK(lhs == doctest::Approx(rhs).epsilon(1e-10).scale(1e-10));
            }
        }
    }
    CHECK_THROWS_AS(corollary_check_values(TransformContext(delta1, 0.5), 0.3), DomainError);
    CHECK_THROWS_AS(corollary_check_values(TransformContext(delta1, 0.0), -0.3), DomainError);
}

TEST_CASE("C is continuous in the measure and the ratio")
{
    const double vals[] = {0.3, 0.7, 1.0};
    const auto mu = DiscreteMeasure::uniform(vals);
    for (double lambda : {0.0, 0.5, 1.0}) {
        const TransformContext limit(mu, lambda);
        double sup_prev = INFINITY;
        for (int n : {100, 1000, 10000}) {
            const double lambda_n = lambda == 1.0 ? 1.0 - 1.0 / n : lambda + 1.0 / n;
            const TransformContext ctx(perturbed_three_atoms(n, static_cast<std::uint64_t>(n)), lambda_n);
            double sup = 0.0;
            for (int i = 0; i < 50; ++i) {
                const double z = 0.5 * i / 49.0;
                sup = std::max(sup, std::abs(rect_R_C(ctx, z) - rect_R_C(limit, z)));
            }
            CHECK(sup < sup_prev);
            sup_prev = sup;
            if (n == 10000)
                CHECK(sup <= 1e-3);
        }
    }
}
