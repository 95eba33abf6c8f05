#include "rectfree/spherical_mc.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdlib>
#include <string>
#include <thread>

#include <Eigen/SVD>

#include "rectfree/ensembles.hpp"
#include "rectfree/errors.hpp"

namespace rectfree {

namespace {

/// Runs fn(i) for i in [0, count), in contiguous chunks over `threads` workers.
template <typename Fn>
void for_each_index(long count, int threads, Fn&& fn)
{
    if (threads <= 1 || count < 2) {
        for (long i = 0; i < count; ++i)
            fn(i);
        return;
    }
    const long workers = std::min<long>(threads, count);
    std::vector<std::jthread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (long w = 0; w < workers; ++w) {
        const long begin = count * w / workers;
        const long end = count * (w + 1) / workers;
        pool.emplace_back([begin, end, &fn] {
            for (long i = begin; i < end; ++i)
                fn(i);
        });
    }
}

/// Re sum_k u_k mu_k v_k for one draw of (u, v).
template <typename Scalar>
double bilinear_form(const MatrixModel& model, Rng& rng)
{
    const Vector<Scalar> u = sample_unit_sphere<Scalar>(model.n, rng);
    const Vector<Scalar> v = sample_unit_sphere<Scalar>(model.m, rng);
    Scalar acc(0);
    for (int k = 0; k < model.n; ++k)
        acc += u(k) * model.singular_values(k) * v(k);
    return std::real(acc);
}

std::vector<double> sample_bilinear_forms(const MatrixModel& model, long samples, std::uint64_t seed,
                                          McOptions opts)
{
    std::vector<double> out(static_cast<std::size_t>(samples));
    for_each_index(samples, opts.threads, [&](long i) {
        Rng rng = substream(seed, static_cast<std::uint64_t>(i));
        out[static_cast<std::size_t>(i)] = model.field == Field::Real ? bilinear_form<double>(model, rng)
                                                                      : bilinear_form<std::complex<double>>(model, rng);
    });
    return out;
}

void check_samples(long samples, long minimum)
{
    if (samples < minimum)
        throw InvalidInput("need at least " + std::to_string(minimum) + " Monte Carlo samples");
}

template <typename Scalar>
Eigen::VectorXd sum_singular_values(std::span<const double> a_vals, std::span<const double> b_vals, int n, int m,
                                    Rng& rng)
{
    Matrix<Scalar> a = Matrix<Scalar>::Zero(n, m);
    Matrix<Scalar> b = Matrix<Scalar>::Zero(n, m);
    for (int k = 0; k < n; ++k) {
        a(k, k) = a_vals[static_cast<std::size_t>(k)];
        b(k, k) = b_vals[static_cast<std::size_t>(k)];
    }
    const Matrix<Scalar> u = sample_haar<Scalar>(n, rng);
    const Matrix<Scalar> v = sample_haar<Scalar>(m, rng);
    const Matrix<Scalar> sum = a + u * b * v;
    Eigen::BDCSVD<Matrix<Scalar>> svd(sum);
    if (svd.info() != Eigen::Success)
        throw NumericalError("SVD of A + UBV failed");
    return svd.singularValues();
}

} // namespace

MatrixModel MatrixModel::make(std::span<const double> values, int m, Field field)
{
    if (values.empty())
        throw InvalidInput("matrix model needs at least one singular value");
    const int n = static_cast<int>(values.size());
    if (m < n)
        throw InvalidInput("matrix model needs m >= n (n = " + std::to_string(n) + ", m = " + std::to_string(m) + ")");
    MatrixModel model;
    model.singular_values.resize(n);
    for (int k = 0; k < n; ++k) {
        const double v = values[static_cast<std::size_t>(k)];
        if (!std::isfinite(v) || v < 0.0)
            throw InvalidInput("singular values must be finite and nonnegative");
        model.singular_values(k) = v;
    }
    model.n = n;
    model.m = m;
    model.field = field;
    return model;
}

McOptions mc_options_from_env()
{
    McOptions opts;
    if (const char* env = std::getenv("RECTFREE_THREADS")) {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end != env && *end == '\0' && v > 0)
            opts.threads = static_cast<int>(std::min<long>(v, 1024));
    }
    return opts;
}

McEstimate estimate_In(const MatrixModel& model, double theta, long samples, std::uint64_t seed, McOptions opts)
{
    check_samples(samples, 1);
    if (!std::isfinite(theta))
        throw DomainError("theta must be finite");
    McEstimate est{0.0, 0.0, samples, seed};
    if (theta == 0.0 || model.K() == 0.0)
        return est;

    const double scale = std::sqrt(static_cast<double>(model.n) * model.m) * theta;
    std::vector<double> exponents = sample_bilinear_forms(model, samples, seed, opts);
    for (double& s : exponents)
        s *= scale;

    const double top = *std::max_element(exponents.begin(), exponents.end());
    double sum = 0.0, sum_sq = 0.0;
    for (double s : exponents) {
        const double w = std::exp(s - top);
        sum += w;
        sum_sq += w * w;
    }
    const double count = static_cast<double>(samples);
    const double mean = sum / count;
    est.value = (top + std::log(mean)) / model.n;
    if (samples > 1) {
        const double var = std::max(0.0, (sum_sq / count - mean * mean) * count / (count - 1.0));
        // d log(x) = dx / x
        est.std_error = std::sqrt(var / count) / mean / model.n;
    }
    return est;
}

McEstimate estimate_classical_cumulant_c2(const MatrixModel& model, long samples, std::uint64_t seed, McOptions opts)
{
    check_samples(samples, 2);
    McEstimate est{0.0, 0.0, samples, seed};
    if (model.K() == 0.0)
        return est;

    const std::vector<double> x = sample_bilinear_forms(model, samples, seed, opts);
    const double count = static_cast<double>(samples);
    double mean = 0.0;
    for (double v : x)
        mean += v;
    mean /= count;
    double m2 = 0.0, m4 = 0.0;
    for (double v : x) {
        const double d2 = (v - mean) * (v - mean);
        m2 += d2;
        m4 += d2 * d2;
    }
    const double var = m2 / (count - 1.0);
    m4 /= count;
    const double factor = static_cast<double>(model.m) * model.beta();
    est.value = factor * var;
    est.std_error = factor * std::sqrt(std::max(0.0, m4 - var * var) / count);
    return est;
}

Eigen::VectorXd sample_sum_singular_values(std::span<const double> a_vals, std::span<const double> b_vals, int n,
                                           int m, Field field, Rng& rng)
{
    if (n < 1 || m < n)
        throw InvalidInput("need 1 <= n <= m");
    if (a_vals.size() != static_cast<std::size_t>(n) || b_vals.size() != static_cast<std::size_t>(n))
        throw InvalidInput("A and B need exactly n singular values each");
    for (auto vals : {a_vals, b_vals})
        for (double v : vals)
            if (!std::isfinite(v) || v < 0.0)
                throw InvalidInput("singular values must be finite and nonnegative");

    // U B V = 0 exactly: the singular values are those of A
    if (std::all_of(b_vals.begin(), b_vals.end(), [](double v) { return v == 0.0; })) {
        Eigen::VectorXd out = Eigen::Map<const Eigen::VectorXd>(a_vals.data(), n);
        std::sort(out.data(), out.data() + n, std::greater<>());
        return out;
    }
    return field == Field::Real ? sum_singular_values<double>(a_vals, b_vals, n, m, rng)
                                : sum_singular_values<std::complex<double>>(a_vals, b_vals, n, m, rng);
}

DiscreteMeasure sample_sum_singular_law(std::span<const double> a_vals, std::span<const double> b_vals, int n, int m,
                                        Field field, Rng& rng)
{
    const Eigen::VectorXd s = sample_sum_singular_values(a_vals, b_vals, n, m, field, rng);
    return from_singular_values({s.data(), static_cast<std::size_t>(s.size())});
}

} // namespace rectfree
