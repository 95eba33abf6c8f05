#pragma once

#include "rectfree/measure.hpp"
#include "rectfree/power_series.hpp"

namespace rectfree {

using Series = PowerSeries<double>;

inline constexpr int kDefaultSeriesOrder = 12;

/// [0, m_1, ..., m_N] with m_k = moment(mu^2, k): the Taylor series of M_{mu^2}.
Series moment_series_of_square(const DiscreteMeasure& mu, int order);

/// Taylor series of the rectangular R-transform C at 0; coefficient k is c_{2k}.
/// Built from C(z) = T^-1(z / H^-1(z)) with H(z) = z T(M(z)).
Series rect_cumulants(const DiscreteMeasure& mu, double lambda, int order = kDefaultSeriesOrder);

/// Same, from a moment series of mu^2 (coefficient 0 must vanish).
Series rect_cumulants_from_moments(const Series& moments, double lambda);

/// Inverse map: M = C o W^-1 with W(z) = z / T(C(z)).
Series cumulants_to_squared_moments(const Series& cumulants, double lambda);

/// Moment series of (muA [+]_lambda muB)^2 via additivity of the cumulant series.
Series rect_free_convolve(const DiscreteMeasure& muA, const DiscreteMeasure& muB, double lambda,
                          int order = kDefaultSeriesOrder);

/// Series of x(u) = T^-1(1 + u) around u = 0.
Series T_lambda_inv_series(double lambda, int order);

} // namespace rectfree
