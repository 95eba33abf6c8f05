#include "rectfree/cumulants.hpp"

#include <cmath>
#include <string>

#include "rectfree/errors.hpp"

namespace rectfree {

namespace {

// Internal arithmetic runs in extended precision; the reversions amplify rounding
// by roughly the size of the largest coefficient.
using Wide = long double;
using WideSeries = PowerSeries<Wide>;

void check_lambda(double lambda)
{
    if (!(lambda >= 0.0 && lambda <= 1.0))
        throw InvalidInput("lambda must lie in [0, 1]");
}

template <typename To, typename From>
PowerSeries<To> convert(const PowerSeries<From>& s)
{
    return PowerSeries<To>(typename PowerSeries<To>::Coefficients(s.coefficients().template cast<To>()));
}

/// T(s) = (lambda s + 1)(s + 1) applied to a series.
template <typename Scalar>
PowerSeries<Scalar> apply_T(const PowerSeries<Scalar>& s, Scalar lambda)
{
    const int n = s.order();
    PowerSeries<Scalar> lin = series_scale(s, lambda);
    lin[0] += Scalar(1);
    PowerSeries<Scalar> shifted = s;
    shifted[0] += Scalar(1);
    return series_mul(lin, shifted.truncated(n));
}

/// z * f, truncated to `order`.
template <typename Scalar>
PowerSeries<Scalar> times_z(const PowerSeries<Scalar>& f, int order)
{
    PowerSeries<Scalar> out(order);
    for (int k = 1; k <= order && k - 1 <= f.order(); ++k)
        out[k] = f[k - 1];
    return out;
}

template <typename Scalar>
PowerSeries<Scalar> inv_T_series(Scalar lambda, int order)
{
    // (1 + lambda) x + lambda x^2 = u, solved order by order
    PowerSeries<Scalar> x(order);
    if (order >= 1)
        x[1] = Scalar(1) / (Scalar(1) + lambda);
    for (int k = 2; k <= order; ++k) {
        Scalar sq(0);
        for (int j = 1; j < k; ++j)
            sq += x[j] * x[k - j];
        x[k] = -lambda * sq / (Scalar(1) + lambda);
    }
    return x;
}

WideSeries wide_cumulants(const WideSeries& moments, Wide lambda)
{
    const int n = moments.order() - 1;
    // H = z T(M) through z^{n+1}, so that z / H^-1(z) is known through z^n
    const WideSeries H = times_z(apply_T(moments, lambda), n + 1);
    const WideSeries H_inv = series_reversion(H);
    WideSeries h(n);
    for (int k = 0; k <= n; ++k)
        h[k] = H_inv[k + 1];
    WideSeries u = series_reciprocal(h);
    u[0] -= Wide(1);
    return series_compose(inv_T_series(lambda, n), u);
}

WideSeries wide_moments(const WideSeries& cumulants, Wide lambda)
{
    const int n = cumulants.order();
    const WideSeries W = times_z(series_reciprocal(apply_T(cumulants, lambda)), n);
    return series_compose(cumulants, series_reversion(W));
}

WideSeries wide_moment_series(const DiscreteMeasure& mu, int order)
{
    WideSeries out(order);
    for (Eigen::Index i = 0; i < mu.size(); ++i) {
        const Wide t2 = Wide(mu.atoms()(i)) * Wide(mu.atoms()(i));
        Wide power = 1;
        for (int k = 1; k <= order; ++k) {
            power *= t2;
            out[k] += Wide(mu.weights()(i)) * power;
        }
    }
    return out;
}

void check_order(int order)
{
    if (order < 1)
        throw InvalidInput("series order must be at least 1");
}

} // namespace

Series moment_series_of_square(const DiscreteMeasure& mu, int order)
{
    check_order(order);
    return convert<double>(wide_moment_series(mu, order));
}

Series T_lambda_inv_series(double lambda, int order)
{
    check_lambda(lambda);
    return inv_T_series(lambda, order);
}

Series rect_cumulants_from_moments(const Series& moments, double lambda)
{
    check_lambda(lambda);
    if (moments[0] != 0.0)
        throw InvalidInput("moment series of M must have a zero constant term");
    if (moments.order() < 2)
        throw InvalidInput("need moments through order 2 to get one cumulant");
    return convert<double>(wide_cumulants(convert<Wide>(moments), lambda));
}

Series rect_cumulants(const DiscreteMeasure& mu, double lambda, int order)
{
    check_lambda(lambda);
    check_order(order);
    return convert<double>(wide_cumulants(wide_moment_series(mu, order + 1), lambda));
}

Series cumulants_to_squared_moments(const Series& cumulants, double lambda)
{
    check_lambda(lambda);
    if (cumulants[0] != 0.0)
        throw InvalidInput("cumulant series must have a zero constant term");
    return convert<double>(wide_moments(convert<Wide>(cumulants), lambda));
}

Series rect_free_convolve(const DiscreteMeasure& muA, const DiscreteMeasure& muB, double lambda, int order)
{
    check_lambda(lambda);
    check_order(order);
    const WideSeries sum = wide_cumulants(wide_moment_series(muA, order + 1), lambda) +
                           wide_cumulants(wide_moment_series(muB, order + 1), lambda);
    return convert<double>(wide_moments(sum, lambda));
}

} // namespace rectfree
