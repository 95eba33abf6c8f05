#pragma once

#include <complex>
#include <random>
#include <type_traits>

#include <Eigen/Dense>

#include "rectfree/errors.hpp"

namespace rectfree {

template <typename T>
struct is_complex : std::false_type {};
template <typename T>
struct is_complex<std::complex<T>> : std::true_type {};

template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
template <typename Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

/// Standard Gaussian in R (Scalar = double) or C (E|z|^2 = 1, Scalar = std::complex<double>).
template <typename Scalar, typename Rng>
Scalar standard_gaussian(Rng& rng)
{
    std::normal_distribution<double> normal;
    if constexpr (is_complex<Scalar>::value) {
        const double re = normal(rng);
        const double im = normal(rng);
        return Scalar(re, im) * std::sqrt(0.5);
    } else {
        return normal(rng);
    }
}

template <typename Scalar, typename Rng>
Matrix<Scalar> gaussian_matrix(Eigen::Index rows, Eigen::Index cols, Rng& rng)
{
    return Matrix<Scalar>::NullaryExpr(rows, cols, [&]() { return standard_gaussian<Scalar>(rng); });
}

/// Uniform vector on the unit sphere of K^dim: a normalized standard Gaussian.
template <typename Scalar, typename Rng>
Vector<Scalar> sample_unit_sphere(Eigen::Index dim, Rng& rng)
{
    if (dim < 1)
        throw InvalidInput("sphere dimension must be positive");
    Vector<Scalar> g = gaussian_matrix<Scalar>(dim, 1, rng);
    double norm = g.norm();
    while (norm == 0.0) {
        g = gaussian_matrix<Scalar>(dim, 1, rng);
        norm = g.norm();
    }
    return g / norm;
}

/// Haar-distributed orthogonal (double) or unitary (complex) matrix.
///
/// QR of a Gaussian matrix, with column j of Q multiplied by the phase of R(j, j)
/// so that the triangular factor has a positive diagonal; that makes the
/// factorization unique and the law of Q exactly Haar.
template <typename Scalar, typename Rng>
Matrix<Scalar> sample_haar(Eigen::Index dim, Rng& rng)
{
    if (dim < 1)
        throw InvalidInput("Haar matrix dimension must be positive");
    const Eigen::HouseholderQR<Matrix<Scalar>> qr(gaussian_matrix<Scalar>(dim, dim, rng));
    Matrix<Scalar> q = qr.householderQ();
    const auto& r = qr.matrixQR();
    for (Eigen::Index j = 0; j < dim; ++j) {
        const Scalar d = r(j, j);
        const double mag = std::abs(d);
        if (mag > 0.0)
            q.col(j) *= d / mag;
    }
    return q;
}

} // namespace rectfree
