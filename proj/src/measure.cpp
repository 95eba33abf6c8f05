#include "rectfree/measure.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "rectfree/errors.hpp"

namespace rectfree {

namespace {

constexpr double kMergeTolerance = 1e-14;
constexpr double kWeightSumTolerance = 1e-9;

} // namespace

DiscreteMeasure::DiscreteMeasure(std::span<const double> atoms, std::span<const double> weights)
{
    if (atoms.empty())
        throw InvalidInput("measure needs at least one atom");
    if (atoms.size() != weights.size())
        throw InvalidInput("atoms and weights differ in length (" + std::to_string(atoms.size()) +
                           " vs " + std::to_string(weights.size()) + ")");

    std::vector<std::pair<double, double>> pairs;
    pairs.reserve(atoms.size());
    double total = 0.0;
    for (std::size_t i = 0; i < atoms.size(); ++i) {
        if (!std::isfinite(atoms[i]))
            throw InvalidInput("non-finite atom at index " + std::to_string(i));
        if (!std::isfinite(weights[i]) || weights[i] < 0.0)
            throw InvalidInput("weight at index " + std::to_string(i) + " is negative or non-finite");
        total += weights[i];
        pairs.emplace_back(atoms[i], weights[i]);
    }
    if (std::abs(total - 1.0) > kWeightSumTolerance)
        throw InvalidInput("weights sum to " + std::to_string(total) + ", expected 1");
    for (auto& p : pairs)
        p.second /= total;
    finish(std::move(pairs));
}

void DiscreteMeasure::finish(std::vector<std::pair<double, double>> pairs)
{
    std::erase_if(pairs, [](const auto& p) { return p.second == 0.0; });
    if (pairs.empty())
        throw InvalidInput("measure has no atom with positive weight");
    std::sort(pairs.begin(), pairs.end());

    double bound = 0.0;
    for (const auto& p : pairs)
        bound = std::max(bound, std::abs(p.first));
    const double merge_gap = kMergeTolerance * bound;

    std::vector<std::pair<double, double>> merged;
    merged.reserve(pairs.size());
    for (const auto& p : pairs) {
        if (!merged.empty() && p.first - merged.back().first <= merge_gap)
            merged.back().second += p.second;
        else
            merged.push_back(p);
    }

    atoms_.resize(static_cast<Eigen::Index>(merged.size()));
    weights_.resize(atoms_.size());
    for (Eigen::Index i = 0; i < atoms_.size(); ++i) {
        atoms_(i) = merged[static_cast<std::size_t>(i)].first;
        weights_(i) = merged[static_cast<std::size_t>(i)].second;
    }
    weights_ /= weights_.sum();
    support_bound_ = atoms_.cwiseAbs().maxCoeff();
}

DiscreteMeasure DiscreteMeasure::dirac(double at)
{
    const double one = 1.0;
    return DiscreteMeasure({&at, 1}, {&one, 1});
}

DiscreteMeasure DiscreteMeasure::uniform(std::span<const double> values)
{
    if (values.empty())
        throw InvalidInput("uniform law of an empty sequence");
    std::vector<double> w(values.size(), 1.0 / static_cast<double>(values.size()));
    return DiscreteMeasure(values, w);
}

bool DiscreteMeasure::approx_equal(const DiscreteMeasure& other, double tol) const
{
    if (size() != other.size())
        return false;
    return (atoms_ - other.atoms_).cwiseAbs().maxCoeff() <= tol &&
           (weights_ - other.weights_).cwiseAbs().maxCoeff() <= tol;
}

DiscreteMeasure from_singular_values(std::span<const double> values)
{
    if (values.empty())
        throw InvalidInput("empty singular value list");
    for (double v : values)
        if (!std::isfinite(v) || v < 0.0)
            throw InvalidInput("singular values must be finite and nonnegative");
    return DiscreteMeasure::uniform(values);
}

DiscreteMeasure symmetrize(const DiscreteMeasure& mu)
{
    const auto n = static_cast<std::size_t>(mu.size());
    std::vector<double> atoms(2 * n), weights(2 * n);
    for (std::size_t i = 0; i < n; ++i) {
        const auto k = static_cast<Eigen::Index>(i);
        atoms[i] = mu.atoms()(k);
        atoms[n + i] = -mu.atoms()(k);
        weights[i] = weights[n + i] = 0.5 * mu.weights()(k);
    }
    return DiscreteMeasure(atoms, weights);
}

DiscreteMeasure square_pushforward(const DiscreteMeasure& mu)
{
    std::vector<double> atoms(static_cast<std::size_t>(mu.size()));
    std::vector<double> weights(atoms.size());
    for (Eigen::Index i = 0; i < mu.size(); ++i) {
        atoms[static_cast<std::size_t>(i)] = mu.atoms()(i) * mu.atoms()(i);
        weights[static_cast<std::size_t>(i)] = mu.weights()(i);
    }
    return DiscreteMeasure(atoms, weights);
}

double moment(const DiscreteMeasure& mu, int k)
{
    if (k < 0)
        throw InvalidInput("moment order must be nonnegative");
    double sum = 0.0;
    for (Eigen::Index i = 0; i < mu.size(); ++i)
        sum += mu.weights()(i) * std::pow(mu.atoms()(i), k);
    return sum;
}

double moment_gen_M(const DiscreteMeasure& mu, double z)
{
    double sum = 0.0;
    for (Eigen::Index i = 0; i < mu.size(); ++i) {
        const double s = mu.atoms()(i) * mu.atoms()(i) * z;
        const double denom = 1.0 - s;
        if (denom == 0.0)
            throw DomainError("M has a pole at z = " + std::to_string(z));
        sum += mu.weights()(i) * s / denom;
    }
    return sum;
}

double cauchy_G(const DiscreteMeasure& mu, double z)
{
    double sum = 0.0;
    for (Eigen::Index i = 0; i < mu.size(); ++i) {
        const double d = z - mu.atoms()(i);
        if (d == 0.0)
            throw DomainError("Cauchy transform evaluated on an atom (z = " + std::to_string(z) + ")");
        sum += mu.weights()(i) / d;
    }
    return sum;
}

std::vector<double> quantile_points(const DiscreteMeasure& mu, int n)
{
    if (n < 1)
        throw InvalidInput("quantile discretization needs n >= 1");
    std::vector<double> cdf(static_cast<std::size_t>(mu.size()));
    std::partial_sum(mu.weights().begin(), mu.weights().end(), cdf.begin());
    cdf.back() = 1.0;

    std::vector<double> out(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        const double q = (i + 0.5) / n;
        const auto it = std::lower_bound(cdf.begin(), cdf.end(), q);
        out[static_cast<std::size_t>(i)] = mu.atoms()(it - cdf.begin());
    }
    return out;
}

} // namespace rectfree
