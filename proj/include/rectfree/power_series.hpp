#pragma once

#include <algorithm>
#include <cmath>
#include <initializer_list>
#include <string>

#include <Eigen/Core>

#include "rectfree/errors.hpp"

namespace rectfree {

/// Formal power series truncated at order N: coefficient k multiplies z^k, k = 0..N.
///
/// Binary operations truncate at the smaller of the two orders and never read
/// past it, so every result is the exact truncation of the formal operation.
template <typename Scalar>
class PowerSeries {
public:
    using Coefficients = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

    explicit PowerSeries(int order) : coeffs_(Coefficients::Zero(order + 1))
    {
        if (order < 0)
            throw InvalidInput("power series order must be nonnegative");
    }
    PowerSeries(int order, std::initializer_list<Scalar> leading) : PowerSeries(order)
    {
        Eigen::Index k = 0;
        for (Scalar c : leading) {
            if (k > order)
                break;
            coeffs_(k++) = c;
        }
    }
    explicit PowerSeries(Coefficients coeffs) : coeffs_(std::move(coeffs))
    {
        if (coeffs_.size() == 0)
            throw InvalidInput("power series needs at least a constant term");
    }

    static PowerSeries identity(int order)
    {
        PowerSeries z(order);
        if (order >= 1)
            z[1] = Scalar(1);
        return z;
    }
    static PowerSeries constant(int order, Scalar c) { return PowerSeries(order, {c}); }

    int order() const { return static_cast<int>(coeffs_.size()) - 1; }
    const Coefficients& coefficients() const { return coeffs_; }
    Scalar operator[](int k) const { return coeffs_(k); }
    Scalar& operator[](int k) { return coeffs_(k); }

    PowerSeries truncated(int order) const
    {
        PowerSeries out(order);
        const int n = std::min(order, this->order());
        out.coeffs_.head(n + 1) = coeffs_.head(n + 1);
        return out;
    }

    /// Horner evaluation of the truncated polynomial.
    template <typename Arg>
    auto operator()(const Arg& z) const
    {
        decltype(Scalar() * z) acc = coeffs_(order());
        for (int k = order() - 1; k >= 0; --k)
            acc = acc * z + coeffs_(k);
        return acc;
    }

private:
    Coefficients coeffs_;
};

template <typename Scalar>
PowerSeries<Scalar> series_add(const PowerSeries<Scalar>& f, const PowerSeries<Scalar>& g)
{
    const int n = std::min(f.order(), g.order());
    return PowerSeries<Scalar>(typename PowerSeries<Scalar>::Coefficients(f.coefficients().head(n + 1) +
                                                                          g.coefficients().head(n + 1)));
}

template <typename Scalar>
PowerSeries<Scalar> series_scale(const PowerSeries<Scalar>& f, Scalar s)
{
    return PowerSeries<Scalar>(typename PowerSeries<Scalar>::Coefficients(f.coefficients() * s));
}

template <typename Scalar>
PowerSeries<Scalar> series_mul(const PowerSeries<Scalar>& f, const PowerSeries<Scalar>& g)
{
    const int n = std::min(f.order(), g.order());
    PowerSeries<Scalar> out(n);
    for (int i = 0; i <= n; ++i) {
        if (f[i] == Scalar(0))
            continue;
        for (int j = 0; i + j <= n; ++j)
            out[i + j] += f[i] * g[j];
    }
    return out;
}

template <typename Scalar>
PowerSeries<Scalar> operator+(const PowerSeries<Scalar>& f, const PowerSeries<Scalar>& g)
{
    return series_add(f, g);
}

template <typename Scalar>
PowerSeries<Scalar> operator-(const PowerSeries<Scalar>& f, const PowerSeries<Scalar>& g)
{
    return series_add(f, series_scale(g, Scalar(-1)));
}

template <typename Scalar>
PowerSeries<Scalar> operator*(const PowerSeries<Scalar>& f, const PowerSeries<Scalar>& g)
{
    return series_mul(f, g);
}

/// f(g(z)); g must have a zero constant term.
template <typename Scalar>
PowerSeries<Scalar> series_compose(const PowerSeries<Scalar>& f, const PowerSeries<Scalar>& g)
{
    if (g[0] != Scalar(0))
        throw InvalidInput("composition needs an inner series with zero constant term");
    const int n = std::min(f.order(), g.order());
    // Horner in the series ring: f_N, f_N g + f_{N-1}, ...
    PowerSeries<Scalar> acc = PowerSeries<Scalar>::constant(n, f[n]);
    const PowerSeries<Scalar> inner = g.truncated(n);
    for (int k = n - 1; k >= 0; --k) {
        acc = series_mul(acc, inner);
        acc[0] += f[k];
    }
    return acc;
}

/// 1 / f; needs f(0) != 0.
template <typename Scalar>
PowerSeries<Scalar> series_reciprocal(const PowerSeries<Scalar>& f)
{
    if (f[0] == Scalar(0))
        throw InvalidInput("reciprocal of a series with zero constant term");
    const int n = f.order();
    PowerSeries<Scalar> out(n);
    out[0] = Scalar(1) / f[0];
    for (int k = 1; k <= n; ++k) {
        Scalar acc(0);
        for (int j = 1; j <= k; ++j)
            acc += f[j] * out[k - j];
        out[k] = -acc / f[0];
    }
    return out;
}

/// Compositional inverse g with f(g(z)) = z + O(z^{N+1}); needs f(0) = 0, f'(0) != 0.
///
/// Coefficients are fixed one order at a time: with g known through z^{k-1},
/// the z^k coefficient of f(g) is f_1 g_k plus terms in lower coefficients only.
template <typename Scalar>
PowerSeries<Scalar> series_reversion(const PowerSeries<Scalar>& f)
{
    if (f.order() < 1 || f[0] != Scalar(0) || f[1] == Scalar(0))
        throw InvalidInput("reversion needs f(0) = 0 and f'(0) != 0");
    const int n = f.order();
    PowerSeries<Scalar> g = PowerSeries<Scalar>::identity(n);
    g[1] = Scalar(1) / f[1];
    for (int k = 2; k <= n; ++k) {
        const Scalar excess = series_compose(f, g.truncated(k))[k];
        g[k] = -excess / f[1];
    }
    return g;
}

} // namespace rectfree
