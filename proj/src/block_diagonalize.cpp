#include "rectfree/spherical_mc.hpp"

#include <cmath>

#include "rectfree/errors.hpp"

namespace rectfree {

Eigen::MatrixXd block_matrix(double a, double b, std::span<const double> lambdas)
{
    const auto n = static_cast<Eigen::Index>(lambdas.size());
    Eigen::MatrixXd t = Eigen::MatrixXd::Zero(2 * n, 2 * n);
    for (Eigen::Index i = 0; i < n; ++i) {
        t(i, i) = a;
        t(n + i, n + i) = b;
        t(i, n + i) = t(n + i, i) = lambdas[static_cast<std::size_t>(i)];
    }
    return t;
}

BlockDiagonalization block_diagonalize(double a, double b, std::span<const double> lambdas)
{
    const auto n = static_cast<Eigen::Index>(lambdas.size());
    if (n == 0)
        throw InvalidInput("block_diagonalize needs at least one off-diagonal entry");
    BlockDiagonalization out{Eigen::MatrixXd::Zero(2 * n, 2 * n), Eigen::VectorXd(2 * n)};

    const double gap = b - a;
    for (Eigen::Index i = 0; i < n; ++i) {
        const double l = lambdas[static_cast<std::size_t>(i)];
        if (l == 0.0 || !std::isfinite(l))
            throw InvalidInput("off-diagonal block must be invertible (entry " + std::to_string(i) + " is zero)");
        const double root = std::sqrt(gap * gap + 4.0 * l * l);
        // plus = sqrt(Delta) + (b - a), minus = sqrt(Delta) - (b - a), plus * minus = 4 l^2
        double plus, minus;
        if (gap >= 0.0) {
            plus = root + gap;
            minus = 4.0 * l * l / plus;
        } else {
            minus = root - gap;
            plus = 4.0 * l * l / minus;
        }
        // f+- = 1 / sqrt(2 Delta +- 2 (b - a) sqrt(Delta))
        const double f_plus = 1.0 / std::sqrt(2.0 * root * plus);
        const double f_minus = 1.0 / std::sqrt(2.0 * root * minus);

        out.P(i, i) = 2.0 * l * f_plus;
        out.P(i, n + i) = 2.0 * l * f_minus;
        out.P(n + i, i) = plus * f_plus;
        out.P(n + i, n + i) = -minus * f_minus;
        out.D(i) = 0.5 * (a + b + root);
        out.D(n + i) = 0.5 * (a + b - root);
    }
    return out;
}

} // namespace rectfree
