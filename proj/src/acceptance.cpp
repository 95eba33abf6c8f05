#include "rectfree/acceptance.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>

#include <json.hpp>

#include "rectfree/cumulants.hpp"
#include "rectfree/errors.hpp"
#include "rectfree/transforms.hpp"

namespace rectfree {

namespace {

const std::vector<double> kLambdas{0.0, 0.25, 0.5, 1.0};

std::vector<double> linspace(double a, double b, int count)
{
    std::vector<double> out(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i)
        out[static_cast<std::size_t>(i)] = count == 1 ? a : a + (b - a) * i / (count - 1);
    return out;
}

std::string num(double x)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", x);
    return buf;
}

/// Tracks the worst |error| / allowed ratio and where it happened.
struct Worst {
    double ratio = 0.0;
    double error = 0.0;
    std::string where;

    void update(double err, double allowed, const std::string& at)
    {
        if (std::isnan(ratio))
            return;
        const double r = allowed > 0.0 ? err / allowed : (err > 0.0 ? INFINITY : 0.0);
        if (where.empty() || !(r <= ratio)) {
            ratio = r;
            error = err;
            where = at;
        }
    }
};

DiscreteMeasure random_measure(Rng& rng, int max_atoms, double lo, double hi)
{
    std::uniform_int_distribution<int> count(1, max_atoms);
    std::uniform_real_distribution<double> atom(lo, hi);
    std::uniform_real_distribution<double> weight(0.05, 1.0);
    const int k = count(rng);
    std::vector<double> atoms(static_cast<std::size_t>(k)), weights(atoms.size());
    double total = 0.0;
    for (int i = 0; i < k; ++i) {
        atoms[static_cast<std::size_t>(i)] = atom(rng);
        total += weights[static_cast<std::size_t>(i)] = weight(rng);
    }
    for (double& w : weights)
        w /= total;
    return DiscreteMeasure(atoms, weights);
}

double abs_error(double a, double b) { return std::abs(a - b); }

// ---- criteria -------------------------------------------------------------

CriterionResult gamma_agreement(const AcceptanceConfig& cfg)
{
    CriterionResult r{"1a", "gamma fixed point vs rect_R_C(theta^2)", false, 0, 1e-10 * cfg.tolerance_scale, "", 0};
    Worst worst;
    for (const auto& ref : reference_measures()) {
        const double K = ref.measure.support_bound();
        for (double lambda : kLambdas) {
            const TransformContext ctx(ref.measure, lambda);
            for (double theta : linspace(-0.8 / K, 0.8 / K, 21))
                worst.update(abs_error(rect_R_C(ctx, theta * theta), gamma_fixed_point(ctx, theta)), r.tolerance,
                             ref.name + " lambda=" + num(lambda) + " theta=" + num(theta));
        }
    }
    r.worst = worst.error;
    r.passed = worst.ratio <= 1.0;
    r.detail = "max error " + num(worst.error) + " at " + worst.where;
    return r;
}

CriterionResult series_agreement(const AcceptanceConfig& cfg)
{
    CriterionResult r{"1b", "12-term cumulant series vs rect_R_C on [0, 0.25/K^2]", false, 0,
                      1e-6 * cfg.tolerance_scale, "", 0};
    Worst worst;
    std::ostringstream per_case;
    for (const auto& ref : reference_measures()) {
        const double K = ref.measure.support_bound();
        for (double lambda : kLambdas) {
            const TransformContext ctx(ref.measure, lambda);
            const Series c = rect_cumulants(ref.measure, lambda, 12);
            double case_max = 0.0;
            for (double z : linspace(0.0, 0.25 / (K * K), 21)) {
                const double err = abs_error(rect_R_C(ctx, z), c(z));
                case_max = std::max(case_max, err);
                worst.update(err, r.tolerance, ref.name + " lambda=" + num(lambda) + " z=" + num(z));
            }
            if (case_max > r.tolerance)
                per_case << " [" << ref.name << " lambda=" << num(lambda) << ": " << num(case_max) << "]";
        }
    }
    r.worst = worst.error;
    r.passed = worst.ratio <= 1.0;
    r.detail = "max error " + num(worst.error) + " at " + worst.where;
    if (!r.passed)
        r.detail += "; cases over tolerance:" + per_case.str();
    return r;
}

CriterionResult corollary(const AcceptanceConfig& cfg)
{
    CriterionResult r{"2", "lambda in {0,1} reductions to the classical R-transform", false, 0,
                      1e-9 * cfg.tolerance_scale, "", 0};
    Worst worst;
    for (const auto& ref : reference_measures()) {
        const double K = ref.measure.support_bound();
        const TransformContext square(ref.measure, 1.0);
        const TransformContext flat(ref.measure, 0.0);
        for (double theta : linspace(-0.8 / K, 0.8 / K, 21)) {
            const auto [c1, r1] = corollary_check_values(square, theta);
            worst.update(abs_error(c1, r1), r.tolerance, ref.name + " lambda=1 t=" + num(theta));
            const auto [c0, r0] = corollary_check_values(flat, theta * theta);
            worst.update(abs_error(c0, r0), r.tolerance, ref.name + " lambda=0 t=" + num(theta * theta));
        }
    }
    r.worst = worst.error;
    r.passed = worst.ratio <= 1.0;
    r.detail = "max error " + num(worst.error) + " at " + worst.where;
    return r;
}

CriterionResult quadrature_vs_closed_form(const AcceptanceConfig& cfg)
{
    CriterionResult r{"3", "quadrature vs closed-form limit I(theta), beta in {1,2}", false, 0,
                      1e-7 * cfg.tolerance_scale, "", 0};
    Worst worst;
    for (const auto& ref : reference_measures()) {
        const double K = ref.measure.support_bound();
        for (double lambda : kLambdas) {
            for (int beta : {1, 2}) {
                const TransformContext ctx(ref.measure, lambda, beta);
                for (double theta : linspace(-0.8 / K, 0.8 / K, 21))
                    worst.update(abs_error(limit_integral_I(ctx, theta), closed_form_I(ctx, theta)), r.tolerance,
                                 ref.name + " lambda=" + num(lambda) + " beta=" + std::to_string(beta) +
                                     " theta=" + num(theta));
            }
        }
    }
    r.worst = worst.error;
    r.passed = worst.ratio <= 1.0;
    r.detail = "max error " + num(worst.error) + " at " + worst.where;
    return r;
}

CriterionResult mc_integral_vs_limit(const AcceptanceConfig& cfg)
{
    CriterionResult r{"4", "MC I_n vs limit I (n=64, m=128, real, 2e5 samples)", false, 0, 1.0, "", 0};
    constexpr int n = 64, m = 128;
    constexpr long samples = 200'000;
    const auto refs = reference_measures();
    Worst worst;
    std::ostringstream rows;
    std::uint64_t seed = cfg.seed;
    for (const auto* ref : {&refs[0], &refs[2]}) {
        const auto values = quantile_points(ref->measure, n);
        const MatrixModel model = MatrixModel::make(values, m, Field::Real);
        const TransformContext ctx(from_singular_values(values), static_cast<double>(n) / m, 1);
        for (double theta : {0.1, 0.2, 0.3}) {
            const double limit = limit_integral_I(ctx, theta);
            const McEstimate est = estimate_In(model, theta, samples, ++seed, cfg.mc);
            const double allowed = std::max(0.15 * std::abs(limit), 0.005) * cfg.tolerance_scale;
            const double err = abs_error(est.value, limit);
            worst.update(err, allowed, ref->name + " theta=" + num(theta));
            rows << " [" << ref->name << " theta=" << num(theta) << ": I=" << num(limit) << " I_n=" << num(est.value)
                 << "+-" << num(est.std_error) << " allowed " << num(allowed) << "]";
        }
    }
    r.worst = worst.ratio;
    r.passed = worst.ratio <= 1.0;
    r.detail = "worst error/allowed " + num(worst.ratio) + ";" + rows.str();
    return r;
}

CriterionResult complex_reduction(const AcceptanceConfig& cfg)
{
    CriterionResult r{"5", "complex I_n(theta) vs 2 x real I_2n(theta/2) with doubled values", false, 0,
                      4.0 * cfg.tolerance_scale, "", 0};
    constexpr long samples = 200'000;
    const auto refs = reference_measures();
    Worst worst;
    std::ostringstream rows;
    std::uint64_t seed = cfg.seed + 100;
    for (const auto* ref : {&refs[0], &refs[2]}) {
        const auto values = quantile_points(ref->measure, 32);
        std::vector<double> doubled;
        for (double v : values) {
            doubled.push_back(v);
            doubled.push_back(v);
        }
        const auto cplx = estimate_In(MatrixModel::make(values, 64, Field::Complex), 0.3, samples, ++seed, cfg.mc);
        const auto real = estimate_In(MatrixModel::make(doubled, 128, Field::Real), 0.15, samples, ++seed, cfg.mc);
        const double joint = std::hypot(cplx.std_error, 2.0 * real.std_error);
        const double err = abs_error(cplx.value, 2.0 * real.value);
        worst.update(err / joint, r.tolerance, ref->name);
        rows << " [" << ref->name << ": complex " << num(cplx.value) << " vs 2x real " << num(2.0 * real.value)
             << ", joint stderr " << num(joint) << "]";
    }
    r.worst = worst.error;
    r.passed = worst.ratio <= 1.0;
    r.detail = "worst |diff|/joint stderr " + num(worst.error) + ";" + rows.str();
    return r;
}

CriterionResult additivity_vs_matrix_model(const AcceptanceConfig& cfg)
{
    CriterionResult r{"6", "A+UBV squared-singular moments vs rectangular free convolution (n=300, m=600)", false, 0,
                      0.02 * cfg.tolerance_scale, "", 0};
    constexpr int n = 300, m = 600, realizations = 20;
    const std::vector<double> ones(n, 1.0);
    const auto one = DiscreteMeasure::dirac(1.0);
    const Series predicted = rect_free_convolve(one, one, static_cast<double>(n) / m, 3);

    std::vector<double> empirical(4, 0.0);
    for (int rep = 0; rep < realizations; ++rep) {
        Rng rng = substream(cfg.seed + 200, static_cast<std::uint64_t>(rep));
        const Eigen::VectorXd s = sample_sum_singular_values(ones, ones, n, m, Field::Real, rng);
        const Eigen::ArrayXd s2 = s.array().square();
        for (int k = 1; k <= 3; ++k)
            empirical[static_cast<std::size_t>(k)] += s2.pow(k).mean() / realizations;
    }
    Worst worst;
    std::ostringstream rows;
    for (int k = 1; k <= 3; ++k) {
        const double rel = std::abs(empirical[static_cast<std::size_t>(k)] - predicted[k]) / std::abs(predicted[k]);
        worst.update(rel, r.tolerance, "k=" + std::to_string(k));
        rows << " [k=" << k << ": predicted " << num(predicted[k]) << ", empirical "
             << num(empirical[static_cast<std::size_t>(k)]) << "]";
    }
    r.worst = worst.error;
    r.passed = worst.ratio <= 1.0;
    r.detail = "max relative error " + num(worst.error) + " at " + worst.where + ";" + rows.str();
    return r;
}

CriterionResult cumulant_probe(const AcceptanceConfig& cfg)
{
    CriterionResult r{"7", "classical-cumulant probe of c_2 (n=64, m=128, 1e5 samples)", false, 0,
                      0.05 * cfg.tolerance_scale, "", 0};
    const std::vector<double> ones(64, 1.0);
    const auto est = estimate_classical_cumulant_c2(MatrixModel::make(ones, 128, Field::Real), 100'000,
                                                    cfg.seed + 300, cfg.mc);
    const double c2 = rect_cumulants(DiscreteMeasure::dirac(1.0), 0.5, 4)[1];
    const double rel = std::abs(est.value - c2) / c2;
    r.worst = rel;
    r.passed = rel <= r.tolerance;
    r.detail = "estimate " + num(est.value) + " +- " + num(est.std_error) + " vs c_2 = " + num(c2) +
               " (relative error " + num(rel) + ")";
    return r;
}

CriterionResult block_diagonalization(const AcceptanceConfig& cfg)
{
    CriterionResult r{"8", "explicit 2x2-block diagonalization (1000 draws)", false, 0, 1e-12 * cfg.tolerance_scale,
                      "", 0};
    Rng rng(cfg.seed + 400);
    std::uniform_real_distribution<double> ab(0.5, 3.0), lam(-1.0, 1.0);
    std::uniform_int_distribution<int> dim(1, 8);
    double worst_orth = 0.0, worst_rec = 0.0;
    for (int draw = 0; draw < 1000; ++draw) {
        const double a = ab(rng), b = ab(rng);
        std::vector<double> lambdas(static_cast<std::size_t>(dim(rng)));
        for (double& l : lambdas) {
            do
                l = lam(rng);
            while (l == 0.0);
        }
        const auto bd = block_diagonalize(a, b, lambdas);
        const auto id = Eigen::MatrixXd::Identity(bd.P.rows(), bd.P.cols());
        worst_orth = std::max(worst_orth, (bd.P.transpose() * bd.P - id).cwiseAbs().maxCoeff());
        worst_rec = std::max(worst_rec, (bd.P * bd.D.asDiagonal() * bd.P.transpose() - block_matrix(a, b, lambdas))
                                            .cwiseAbs()
                                            .maxCoeff());
    }
    r.worst = std::max(worst_orth, worst_rec);
    r.passed = worst_orth <= r.tolerance && worst_rec <= r.tolerance;
    r.detail = "max |P^tP - I| " + num(worst_orth) + ", max |PDP^t - T| " + num(worst_rec);
    return r;
}

CriterionResult continuity(const AcceptanceConfig& cfg)
{
    CriterionResult r{"9", "continuity of (lambda, mu) -> C at n = 1e4", false, 0, 1e-3 * cfg.tolerance_scale, "", 0};
    constexpr int n = 10'000;
    const std::vector<double> base_atoms{0.3, 0.7, 1.0};
    const auto mu = DiscreteMeasure::uniform(base_atoms);
    auto points = quantile_points(mu, n);
    Rng rng(cfg.seed + 500);
    std::uniform_real_distribution<double> jitter(-1.0, 1.0);
    for (double& p : points)
        p = std::max(0.0, p + jitter(rng) / n);
    const auto mu_n = DiscreteMeasure::uniform(points);

    Worst worst;
    const double K = mu.support_bound();
    for (double lambda : kLambdas) {
        const double lambda_n = lambda < 1.0 ? lambda + 1.0 / n : lambda - 1.0 / n;
        const TransformContext limit(mu, lambda), approx(mu_n, lambda_n);
        for (double z : linspace(0.0, 0.5 / (K * K), 50))
            worst.update(abs_error(rect_R_C(approx, z), rect_R_C(limit, z)), r.tolerance,
                         "lambda=" + num(lambda) + " z=" + num(z));
    }
    r.worst = worst.error;
    r.passed = worst.ratio <= 1.0;
    r.detail = "sup |C_n - C| " + num(worst.error) + " at " + worst.where;
    return r;
}

CriterionResult round_trip(const AcceptanceConfig& cfg)
{
    CriterionResult r{"10", "moments -> cumulants -> moments round trip (50 measures x 4 lambdas, N=10)", false, 0,
                      1e-11 * cfg.tolerance_scale, "", 0};
    Rng rng(cfg.seed + 600);
    Worst worst;
    for (int trial = 0; trial < 50; ++trial) {
        const auto mu = random_measure(rng, 8, -1.0, 1.0);
        const Series moments = moment_series_of_square(mu, 10);
        for (double lambda : kLambdas) {
            const Series back = cumulants_to_squared_moments(rect_cumulants(mu, lambda, 10), lambda);
            worst.update((back.coefficients() - moments.coefficients()).cwiseAbs().maxCoeff(), r.tolerance,
                         "trial " + std::to_string(trial) + " lambda=" + num(lambda));
        }
    }
    r.worst = worst.error;
    r.passed = worst.ratio <= 1.0;
    r.detail = "max coefficient error " + num(worst.error) + " at " + worst.where;
    return r;
}

bool selected(const AcceptanceConfig& cfg, const std::string& id)
{
    if (cfg.only.empty())
        return true;
    // "1" selects both 1a and 1b
    return std::any_of(cfg.only.begin(), cfg.only.end(), [&](const std::string& want) {
        return want == id || (id.size() > want.size() && id.compare(0, want.size(), want) == 0 &&
                              std::isalpha(static_cast<unsigned char>(id[want.size()])));
    });
}

} // namespace

std::vector<ReferenceMeasure> reference_measures()
{
    std::vector<ReferenceMeasure> out;
    out.push_back({"delta_1", DiscreteMeasure::dirac(1.0)});
    out.push_back({"uniform{1/3,2/3,1}", DiscreteMeasure::uniform(std::vector<double>{1.0 / 3, 2.0 / 3, 1.0})});

    // six atoms in [0.15, 1.2] with weights k_i / 64, k_i >= 1
    Rng rng(6);
    std::uniform_real_distribution<double> atom(0.15, 1.2);
    std::vector<int> cuts(63);
    for (int i = 0; i < 63; ++i)
        cuts[static_cast<std::size_t>(i)] = i + 1;
    std::shuffle(cuts.begin(), cuts.end(), rng);
    cuts.resize(5);
    cuts.push_back(0);
    cuts.push_back(64);
    std::sort(cuts.begin(), cuts.end());
    std::vector<double> atoms(6), weights(6);
    for (int i = 0; i < 6; ++i) {
        atoms[static_cast<std::size_t>(i)] = atom(rng);
        weights[static_cast<std::size_t>(i)] = (cuts[static_cast<std::size_t>(i) + 1] - cuts[static_cast<std::size_t>(i)]) / 64.0;
    }
    out.push_back({"random6", DiscreteMeasure(atoms, weights)});
    return out;
}

std::vector<CriterionResult> run_acceptance(const AcceptanceConfig& config)
{
    using Runner = std::function<CriterionResult(const AcceptanceConfig&)>;
    const std::vector<std::pair<std::string, Runner>> all{
        {"1a", gamma_agreement},
        {"1b", series_agreement},
        {"2", corollary},
        {"3", quadrature_vs_closed_form},
        {"4", mc_integral_vs_limit},
        {"5", complex_reduction},
        {"6", additivity_vs_matrix_model},
        {"7", cumulant_probe},
        {"8", block_diagonalization},
        {"9", continuity},
        {"10", round_trip},
    };
    std::vector<CriterionResult> results;
    for (const auto& [id, run] : all) {
        if (!selected(config, id))
            continue;
        const auto start = std::chrono::steady_clock::now();
        CriterionResult res;
        try {
            res = run(config);
        } catch (const std::exception& e) {
            res.id = id;
            res.title = "(aborted)";
            res.passed = false;
            res.detail = std::string("exception: ") + e.what();
        }
        res.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        results.push_back(std::move(res));
    }
    return results;
}

std::string format_report(const std::vector<CriterionResult>& results)
{
    std::ostringstream out;
    for (const auto& r : results) {
        char head[64];
        std::snprintf(head, sizeof head, "[%s] %-3s ", r.passed ? "PASS" : "FAIL", r.id.c_str());
        out << head << r.title << " | tol " << num(r.tolerance) << " | " << r.detail << " | " << num(r.seconds)
            << " s\n";
    }
    return out.str();
}

std::string report_json(const std::vector<CriterionResult>& results)
{
    nlohmann::json doc;
    doc["criteria"] = nlohmann::json::array();
    bool all = true;
    for (const auto& r : results) {
        all = all && r.passed;
        doc["criteria"].push_back({{"id", r.id},
                                   {"title", r.title},
                                   {"passed", r.passed},
                                   {"worst", r.worst},
                                   {"tolerance", r.tolerance},
                                   {"detail", r.detail}});
    }
    doc["passed"] = all;
    return doc.dump(2);
}

} // namespace rectfree
