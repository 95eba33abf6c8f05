#include "rectfree/transforms.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "rectfree/errors.hpp"
#include "rectfree/quadrature.hpp"
#include "rectfree/roots.hpp"

namespace rectfree {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::string fmt(double x)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

/// {M(z), M'(z)} in one pass over the atoms.
std::pair<double, double> moment_gen_M_with_derivative(const DiscreteMeasure& mu, double z)
{
    double value = 0.0, slope = 0.0;
    for (Eigen::Index i = 0; i < mu.size(); ++i) {
        const double t2 = mu.atoms()(i) * mu.atoms()(i);
        const double denom = 1.0 - t2 * z;
        if (denom == 0.0)
            throw DomainError("M has a pole at z = " + fmt(z));
        value += mu.weights()(i) * t2 * z / denom;
        slope += mu.weights()(i) * t2 / (denom * denom);
    }
    return {value, slope};
}

double T_lambda_derivative(double lambda, double x) { return 2.0 * lambda * x + 1.0 + lambda; }

void check_theta(double theta, double end)
{
    if (!std::isfinite(theta) || std::abs(theta) >= end)
        throw DomainError("theta = " + fmt(theta) + " outside (-" + fmt(end) + ", " + fmt(end) + ")");
}

/// R_nu(t) for t > 0: solves G(1/t + R) = t for R in [min atom, max atom].
double classical_R_positive(const DiscreteMeasure& nu, double t)
{
    const double inv_t = 1.0 / t;
    const double top = nu.max_atom();
    const double w_top = nu.weights()(nu.size() - 1);
    // G(top + delta) >= w_top / delta >= 2t, so the lower end has F > 0.
    const double delta = 0.5 * w_top * inv_t;
    double lo = std::max(nu.min_atom(), top + delta - inv_t);
    double hi = top;
    if (lo >= hi)
        return hi;

    auto fdf = [&](double r) {
        const double z = inv_t + r;
        double g = 0.0, dg = 0.0;
        for (Eigen::Index i = 0; i < nu.size(); ++i) {
            const double d = z - nu.atoms()(i);
            if (d <= 0.0)
                return std::pair{kInf, 0.0};
            g += nu.weights()(i) / d;
            dg -= nu.weights()(i) / (d * d);
        }
        return std::pair{g - t, dg};
    };
    return solve_bracketed(fdf, lo, hi, 1e-15);
}

DiscreteMeasure reflect(const DiscreteMeasure& nu)
{
    std::vector<double> atoms(static_cast<std::size_t>(nu.size())), weights(atoms.size());
    for (Eigen::Index i = 0; i < nu.size(); ++i) {
        atoms[static_cast<std::size_t>(i)] = -nu.atoms()(i);
        weights[static_cast<std::size_t>(i)] = nu.weights()(i);
    }
    return DiscreteMeasure(atoms, weights);
}

double f_closed_form(const TransformContext& ctx, double theta)
{
    const double gamma = rect_R_C(ctx, theta * theta);
    const double lambda = ctx.lambda();
    const double t_gamma = T_lambda(lambda, gamma);
    const double lambda_term = lambda == 0.0 ? 0.5 * gamma : std::log1p(lambda * gamma) / (2.0 * lambda);

    const auto& mu = ctx.measure();
    double log_term = 0.0;
    for (Eigen::Index i = 0; i < mu.size(); ++i) {
        const double a = mu.atoms()(i);
        log_term += mu.weights()(i) * std::log1p(-theta * theta * a * a / t_gamma);
    }
    return gamma - lambda_term - 0.5 * std::log1p(gamma) - 0.5 * log_term;
}

} // namespace

TransformContext::TransformContext(DiscreteMeasure measure, double lambda, int beta)
    : measure_(std::move(measure)), lambda_(lambda), beta_(beta)
{
    if (!(lambda >= 0.0 && lambda <= 1.0))
        throw InvalidInput("lambda must lie in [0, 1], got " + fmt(lambda));
    if (beta != 1 && beta != 2)
        throw InvalidInput("beta must be 1 or 2, got " + std::to_string(beta));
}

double TransformContext::h_domain_end() const { return degenerate() ? kInf : 1.0 / (K() * K()); }

double TransformContext::c_domain_end() const
{
    if (degenerate())
        return kInf;
    double edge_mass = 0.0;
    for (Eigen::Index i = 0; i < measure_.size(); ++i)
        if (std::abs(measure_.atoms()(i)) == K())
            edge_mass += measure_.weights()(i);
    // edge_mass > 0 makes M, hence H, blow up at K^-2
    return edge_mass > 0.0 ? kInf : H_lambda(*this, std::nextafter(h_domain_end(), 0.0));
}

double TransformContext::theta_domain_end() const { return degenerate() ? kInf : beta_ / K(); }

double T_lambda(double lambda, double z) { return (lambda * z + 1.0) * (z + 1.0); }

double T_lambda_inv(double lambda, double y)
{
    if (!(y >= 0.0))
        throw DomainError("T^-1 needs y >= 0, got " + fmt(y));
    // rationalized root of lambda x^2 + (1 + lambda) x + 1 - y = 0, exact at lambda = 0
    const double disc = (1.0 - lambda) * (1.0 - lambda) + 4.0 * lambda * y;
    return 2.0 * (y - 1.0) / ((1.0 + lambda) + std::sqrt(disc));
}

double H_lambda(const TransformContext& ctx, double z)
{
    if (!(z >= 0.0 && z < ctx.h_domain_end()))
        throw DomainError("H is defined on [0, " + fmt(ctx.h_domain_end()) + "), got z = " + fmt(z));
    if (ctx.degenerate())
        return z;
    return z * T_lambda(ctx.lambda(), moment_gen_M(ctx.measure(), z));
}

double H_lambda_derivative(const TransformContext& ctx, double z)
{
    if (!(z >= 0.0 && z < ctx.h_domain_end()))
        throw DomainError("H' is defined on [0, " + fmt(ctx.h_domain_end()) + "), got z = " + fmt(z));
    if (ctx.degenerate())
        return 1.0;
    const auto [m, dm] = moment_gen_M_with_derivative(ctx.measure(), z);
    return T_lambda(ctx.lambda(), m) + z * T_lambda_derivative(ctx.lambda(), m) * dm;
}

double H_inverse(const TransformContext& ctx, double w)
{
    const double sup = ctx.c_domain_end();
    if (!(w >= 0.0 && w < sup))
        throw DomainError("H^-1 is defined on [0, " + fmt(sup) + "), got w = " + fmt(w));
    if (w == 0.0 || ctx.degenerate())
        return w;

    // H(z) >= z puts the root in [0, min(w, K^-2)); back off from the pole until M is finite
    const double end = ctx.h_domain_end();
    auto H_or_inf = [&](double z) {
        try {
            return H_lambda(ctx, z);
        } catch (const DomainError&) {
            return kInf;
        }
    };
    double hi = std::min(w, end * (1.0 - 1e-15));
    for (double backoff = 1e-15; !std::isfinite(H_or_inf(hi)); backoff *= 2.0)
        hi = end * (1.0 - backoff);
    if (H_lambda(ctx, hi) < w)
        throw DomainError("H^-1: w = " + fmt(w) + " exceeds the numerically reachable range of H");

    auto fdf = [&](double z) { return std::pair{H_lambda(ctx, z) - w, H_lambda_derivative(ctx, z)}; };
    return solve_bracketed(fdf, 0.0, hi, 1e-300);
}

double rect_R_C(const TransformContext& ctx, double z)
{
    if (!(z >= 0.0))
        throw DomainError("C is defined on [0, sup H), got z = " + fmt(z));
    if (z == 0.0 || ctx.degenerate())
        return 0.0;
    const double x = H_inverse(ctx, z);
    return std::max(0.0, T_lambda_inv(ctx.lambda(), z / x));
}

double gamma_fixed_point(const TransformContext& ctx, double theta)
{
    if (!std::isfinite(theta))
        throw DomainError("theta must be finite");
    if (theta == 0.0 || ctx.degenerate())
        return 0.0;

    const auto& mu = ctx.measure();
    const double lambda = ctx.lambda();
    const double s = theta * theta;
    const double pole = ctx.h_domain_end();
    const bool inside = s < pole;
    auto phi = [&](double gamma) { return moment_gen_M(mu, s / T_lambda(lambda, gamma)); };

    constexpr double kResidualTol = 1e-13;
    if (inside) {
        // gamma <- M(theta^2 / T(gamma)) from 0; phi is decreasing, so the iterates alternate around the root
        constexpr int kBudget = 10'000;
        double gamma = 0.0;
        double value = phi(gamma);
        int stalls = 0;
        for (int it = 0; it < kBudget; ++it) {
            const double residual = value - gamma;
            if (std::abs(residual) <= kResidualTol)
                return gamma;
            const double next_value = phi(value);
            stalls = std::abs(next_value - value) > 0.99 * std::abs(residual) ? stalls + 1 : 0;
            gamma = value;
            value = next_value;
            if (stalls >= 3)
                break;
        }
    }

    // Bracketed root of phi(gamma) - gamma. Below T^-1(theta^2 K^2) the argument of M
    // passes the pole, where the function is treated as +inf.
    auto fdf = [&](double g) {
        const double tg = T_lambda(lambda, g);
        const double arg = s / tg;
        if (!(arg < pole))
            return std::pair{kInf, 0.0};
        const auto [m, dm] = moment_gen_M_with_derivative(mu, arg);
        return std::pair{m - g, -dm * s * T_lambda_derivative(lambda, g) / (tg * tg) - 1.0};
    };
    double lo = 0.0, hi = 0.0;
    if (inside) {
        hi = phi(0.0);
    } else {
        lo = T_lambda_inv(lambda, s / pole);
        hi = std::max(1.0, 2.0 * lo);
        while (fdf(hi).first > 0.0) {
            lo = hi;
            hi *= 2.0;
            if (!std::isfinite(hi))
                throw NumericalError("gamma fixed point: no sign change found");
        }
    }
    const double gamma = solve_bracketed(fdf, lo, hi, 1e-300);
    const double residual = fdf(gamma).first;
    if (!(std::abs(residual) <= 1e-12 * std::max(1.0, gamma)))
        throw NumericalError("gamma fixed point did not converge, last residual " + fmt(residual));
    return gamma;
}

double classical_R(const DiscreteMeasure& nu, double t)
{
    if (!std::isfinite(t))
        throw DomainError("R-transform argument must be finite");
    if (t == 0.0)
        return moment(nu, 1);
    if (t > 0.0)
        return classical_R_positive(nu, t);
    return -classical_R_positive(reflect(nu), -t);
}

double limit_integral_I(const TransformContext& ctx, double theta)
{
    check_theta(theta, ctx.theta_domain_end());
    if (theta == 0.0 || ctx.degenerate())
        return 0.0;
    const double beta = ctx.beta();
    auto integrand = [&](double t) { return t == 0.0 ? 0.0 : rect_R_C(ctx, t * t) / t; };
    const auto q = integrate_adaptive_simpson(integrand, 0.0, std::abs(theta) / beta, 1e-10);
    return beta * q.value;
}

double closed_form_I(const TransformContext& ctx, double theta)
{
    check_theta(theta, ctx.theta_domain_end());
    if (theta == 0.0 || ctx.degenerate())
        return 0.0;
    return ctx.beta() == 1 ? f_closed_form(ctx, theta) : 2.0 * f_closed_form(ctx, 0.5 * theta);
}

std::pair<double, double> corollary_check_values(const TransformContext& ctx, double t)
{
    if (ctx.lambda() == 1.0)
        return {rect_R_C(ctx, t * t), t * classical_R(symmetrize(ctx.measure()), t)};
    if (ctx.lambda() == 0.0) {
        if (!(t >= 0.0))
            throw DomainError("the lambda = 0 identity is stated for t >= 0, got t = " + fmt(t));
        return {rect_R_C(ctx, t), t * classical_R(square_pushforward(ctx.measure()), t)};
    }
    throw DomainError("corollary identities exist only for lambda in {0, 1}, got " + fmt(ctx.lambda()));
}

} // namespace rectfree
