#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "rectfree/measure.hpp"
#include "rectfree/random.hpp"
#include "rectfree/transforms.hpp"

namespace rectfree {

/// An n x m matrix described by its singular values, with n <= m.
struct MatrixModel {
    Eigen::VectorXd singular_values;
    int n = 0;
    int m = 0;
    Field field = Field::Real;

    /// Validates nonnegative finite values, n = values.size() >= 1 and m >= n.
    static MatrixModel make(std::span<const double> values, int m, Field field);

    double K() const { return singular_values.size() ? singular_values.maxCoeff() : 0.0; }
    double ratio() const { return static_cast<double>(n) / m; }
    int beta() const { return beta_of(field); }
};

struct McEstimate {
    double value = 0.0;
    double std_error = 0.0;
    long samples = 0;
    std::uint64_t seed = 0;
};

/// Worker threads for the sampling loops; 0 runs sequentially. Per-sample draws
/// come from substream(seed, i) and the reduction always runs in index order,
/// so results do not depend on the thread count.
struct McOptions {
    int threads = 0;
};

/// Reads RECTFREE_THREADS (unset or unparsable means 0).
McOptions mc_options_from_env();

/// (1/n) log E exp(sqrt(n m) theta Re sum_k u_k mu_k v_k), u uniform on the
/// n-sphere and v the first n coordinates of a uniform vector on the m-sphere.
/// Log-sum-exp over the samples; the standard error follows from the delta method.
McEstimate estimate_In(const MatrixModel& model, double theta, long samples, std::uint64_t seed,
                       McOptions opts = {});

/// m beta Var(Re sum_k u_k mu_k v_k): the k = 1 classical-cumulant reading of c_2.
McEstimate estimate_classical_cumulant_c2(const MatrixModel& model, long samples, std::uint64_t seed,
                                          McOptions opts = {});

/// Empirical singular law of A + U B V for A, B = diag(values) | 0 (n x m) and
/// independent Haar U (n x n), V (m x m).
DiscreteMeasure sample_sum_singular_law(std::span<const double> a_vals, std::span<const double> b_vals, int n,
                                        int m, Field field, Rng& rng);

/// Same realization, returned as the raw singular values (descending).
Eigen::VectorXd sample_sum_singular_values(std::span<const double> a_vals, std::span<const double> b_vals, int n,
                                           int m, Field field, Rng& rng);

/// Explicit eigendecomposition of T = [[a I, L], [L, b I]] (L = diag(lambdas)):
/// T = P D P^t with P orthogonal and D = diag(r+, r-).
struct BlockDiagonalization {
    Eigen::MatrixXd P;
    Eigen::VectorXd D;
};

BlockDiagonalization block_diagonalize(double a, double b, std::span<const double> lambdas);

/// The 2n x 2n matrix [[a I, L], [L, b I]].
Eigen::MatrixXd block_matrix(double a, double b, std::span<const double> lambdas);

} // namespace rectfree
