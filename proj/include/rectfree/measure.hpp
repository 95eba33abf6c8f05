#pragma once

#include <span>
#include <vector>

#include <Eigen/Core>

namespace rectfree {

/// Finitely supported probability measure on the real line.
///
/// Atoms are kept sorted and distinct (atoms closer than 1e-14 * K are merged),
/// zero-weight atoms are dropped and the weights sum to one. Instances are
/// immutable after construction.
class DiscreteMeasure {
public:
    /// Weights summing to 1 within 1e-9 are renormalized; anything else throws InvalidInput.
    DiscreteMeasure(std::span<const double> atoms, std::span<const double> weights);

    static DiscreteMeasure dirac(double at);
    /// Uniform law on the given values, counted with multiplicity.
    static DiscreteMeasure uniform(std::span<const double> values);

    const Eigen::VectorXd& atoms() const { return atoms_; }
    const Eigen::VectorXd& weights() const { return weights_; }
    Eigen::Index size() const { return atoms_.size(); }

    /// max |atom|.
    double support_bound() const { return support_bound_; }
    double min_atom() const { return atoms_(0); }
    double max_atom() const { return atoms_(atoms_.size() - 1); }

    /// Equality as measures, atom positions and weights compared with tolerance `tol`.
    bool approx_equal(const DiscreteMeasure& other, double tol = 1e-12) const;

private:
    DiscreteMeasure() = default;
    void finish(std::vector<std::pair<double, double>> pairs);

    Eigen::VectorXd atoms_;
    Eigen::VectorXd weights_;
    double support_bound_ = 0.0;
};

/// Empirical law of a list of singular values (nonnegative, nonempty).
DiscreteMeasure from_singular_values(std::span<const double> values);

/// mu_s(A) = (mu(A) + mu(-A)) / 2.
DiscreteMeasure symmetrize(const DiscreteMeasure& mu);

/// Push-forward of mu by t -> t^2.
DiscreteMeasure square_pushforward(const DiscreteMeasure& mu);

double moment(const DiscreteMeasure& mu, int k);

/// Moment generating function of mu^2: int t^2 z / (1 - t^2 z) dmu(t).
/// Accepts any z that is not a pole; the transforms only use z in [0, K^-2).
double moment_gen_M(const DiscreteMeasure& mu, double z);

/// Cauchy transform G(z) = int dmu(t) / (z - t) for real z off the atoms.
double cauchy_G(const DiscreteMeasure& mu, double z);

/// n-point quantile discretization: value i is the ((i + 1/2) / n)-quantile of mu.
std::vector<double> quantile_points(const DiscreteMeasure& mu, int n);

} // namespace rectfree
