#pragma once

#include <utility>

#include "rectfree/measure.hpp"

namespace rectfree {

/// Real (beta = 1) or complex (beta = 2) matrices.
enum class Field { Real = 1, Complex = 2 };

inline int beta_of(Field f) { return static_cast<int>(f); }

/// A measure together with the ratio lambda and the field parameter beta.
///
/// Validates lambda in [0, 1] and beta in {1, 2}; caches K = max |atom|.
/// The measure delta_0 (K = 0) is the degenerate case where every transform
/// vanishes identically and the theta-domain is the whole line.
class TransformContext {
public:
    TransformContext(DiscreteMeasure measure, double lambda, int beta = 1);

    const DiscreteMeasure& measure() const { return measure_; }
    double lambda() const { return lambda_; }
    int beta() const { return beta_; }
    double K() const { return measure_.support_bound(); }
    bool degenerate() const { return K() == 0.0; }

    /// Right end of the H-domain, K^-2 (infinite for delta_0).
    double h_domain_end() const;
    /// sup of H over [0, K^-2): the right end of the C-domain. Infinite whenever
    /// the atom at K carries positive mass, which is always the case for a
    /// discrete measure.
    double c_domain_end() const;
    /// beta / K: the open theta-interval of the limit integral is (-end, end).
    double theta_domain_end() const;

private:
    DiscreteMeasure measure_;
    double lambda_;
    int beta_;
};

/// (lambda z + 1)(z + 1).
double T_lambda(double lambda, double z);
/// The branch of T^-1 mapping [0, inf) onto [-1, inf).
double T_lambda_inv(double lambda, double y);

/// z * T(M(z)) on [0, K^-2).
double H_lambda(const TransformContext& ctx, double z);
/// d/dz H on [0, K^-2).
double H_lambda_derivative(const TransformContext& ctx, double z);
double H_inverse(const TransformContext& ctx, double w);

/// Rectangular R-transform T^-1(z / H^-1(z)), with C(0) = 0.
double rect_R_C(const TransformContext& ctx, double z);

/// gamma >= 0 solving M(theta^2 / T(gamma)) = gamma.
double gamma_fixed_point(const TransformContext& ctx, double theta);

/// Classical R-transform G^-1(t) - 1/t, extended by the mean at t = 0.
double classical_R(const DiscreteMeasure& nu, double t);

/// beta * int_0^{theta/beta} C(t^2) / t dt by adaptive Simpson (abs tol 1e-10).
double limit_integral_I(const TransformContext& ctx, double theta);

/// Closed-form expression of the same limit through gamma = C(theta^2);
/// for beta = 2 it is evaluated as 2 f(theta / 2).
double closed_form_I(const TransformContext& ctx, double theta);

/// lambda = 1: {C(t^2), t R_{mu_s}(t)}; lambda = 0: {C(t), t R_{mu^2}(t)} (t >= 0).
std::pair<double, double> corollary_check_values(const TransformContext& ctx, double t);

} // namespace rectfree
