// Command-line front end for the rectfree library.
//
// CSV column order (fixed):
//   transform : z, C, H, H_inv[, R]
//   integral  : theta, I_quadrature, I_closed_form, discrepancy
//               [, I_mc, std_error, n, m, samples]          (with --mc)
//   convolve  : k, moment[, mc_moment, rel_error]             (with --mc-check)
//   cumulant  : k, c2k[, mc_estimate, std_error]              (with --mc, k = 1 only)
// Empty CSV cells / JSON nulls mark points outside a transform's domain.
// Exit codes: 0 success, 1 verification failure, 2 configuration or I/O error.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "rectfree/acceptance.hpp"
#include "rectfree/cumulants.hpp"
#include "rectfree/errors.hpp"
#include "rectfree/measure_io.hpp"
#include "rectfree/spherical_mc.hpp"
#include "rectfree/transforms.hpp"

namespace {

using rectfree::DiscreteMeasure;
using Cell = std::optional<double>;

constexpr int kExitOk = 0;
constexpr int kExitVerifyFailed = 1;
constexpr int kExitConfig = 2;

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Grid {
    double start = 0.0, stop = 0.0;
    int count = 0;

    std::vector<double> points() const
    {
        std::vector<double> out(static_cast<std::size_t>(count));
        for (int i = 0; i < count; ++i)
            out[static_cast<std::size_t>(i)] = count == 1 ? start : start + (stop - start) * i / (count - 1);
        return out;
    }
};

Grid parse_grid(const std::string& spec, const char* flag)
{
    Grid g;
    char colon1 = 0, colon2 = 0;
    std::istringstream in(spec);
    if (!(in >> g.start >> colon1 >> g.stop >> colon2 >> g.count) || colon1 != ':' || colon2 != ':' || !in.eof() ||
        g.count < 1)
        throw ConfigError(std::string(flag) + " expects start:stop:count with count >= 1, got '" + spec + "'");
    return g;
}

struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;
};

std::string format_cell(const Cell& c)
{
    if (!c)
        return "";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", *c);
    return buf;
}

void write_table(const Table& t, const std::string& path, const std::string& format)
{
    std::ostringstream out;
    if (format == "json") {
        nlohmann::json doc = nlohmann::json::array();
        for (const auto& row : t.rows) {
            nlohmann::json obj = nlohmann::json::object();
            for (std::size_t i = 0; i < t.columns.size(); ++i)
                obj[t.columns[i]] = row[i] ? nlohmann::json(*row[i]) : nlohmann::json(nullptr);
            doc.push_back(std::move(obj));
        }
        out << doc.dump(2) << '\n';
    } else {
        for (std::size_t i = 0; i < t.columns.size(); ++i)
            out << (i ? "," : "") << t.columns[i];
        out << '\n';
        for (const auto& row : t.rows) {
            for (std::size_t i = 0; i < row.size(); ++i)
                out << (i ? "," : "") << format_cell(row[i]);
            out << '\n';
        }
    }
    if (path.empty() || path == "-") {
        std::cout << out.str();
        return;
    }
    std::ofstream file(path);
    if (!file)
        throw ConfigError("cannot write output file " + path);
    file << out.str();
}

/// Evaluates fn, turning domain failures into a null cell plus a warning.
template <typename Fn>
Cell soft(Fn&& fn, const char* what, double at)
{
    try {
        return fn();
    } catch (const rectfree::DomainError& e) {
        std::cerr << "warning: " << what << " at " << at << ": " << e.what() << '\n';
        return std::nullopt;
    }
}

struct Options {
    std::vector<std::string> measures;
    double lambda = 0.5;
    int beta = 1;
    std::string theta_grid = "0:0.5:11";
    std::string z_grid = "0:0.2:11";
    int n = 64;
    int m = 0;
    long samples = 0;
    std::uint64_t seed = 1;
    int order = rectfree::kDefaultSeriesOrder;
    bool mc = false;
    bool classical_r = false;
    std::string output;
    std::string format = "csv";
    // verify
    double tolerance_scale = 1.0;
    std::vector<std::string> only;
    std::optional<std::uint64_t> suite_seed;
};

DiscreteMeasure single_measure(const Options& o)
{
    if (o.measures.size() != 1)
        throw ConfigError("expected exactly one --measure");
    return rectfree::load_measure(o.measures.front());
}

int resolved_m(const Options& o)
{
    if (o.m > 0)
        return o.m;
    return o.lambda > 0.0 ? static_cast<int>(std::lround(o.n / o.lambda)) : 4 * o.n;
}

std::vector<double> model_values(const DiscreteMeasure& mu, int n)
{
    auto values = rectfree::quantile_points(mu, n);
    for (double& v : values)
        v = std::abs(v);
    return values;
}

int cmd_transform(const Options& o)
{
    const rectfree::TransformContext ctx(single_measure(o), o.lambda, o.beta);
    const auto grid = parse_grid(o.z_grid, "--z-grid");
    Table t{{"z", "C", "H", "H_inv"}, {}};
    if (o.classical_r)
        t.columns.push_back("R");
    for (double z : grid.points()) {
        std::vector<Cell> row{z, soft([&] { return rectfree::rect_R_C(ctx, z); }, "C", z),
                              soft([&] { return rectfree::H_lambda(ctx, z); }, "H", z),
                              soft([&] { return rectfree::H_inverse(ctx, z); }, "H^-1", z)};
        if (o.classical_r)
            row.push_back(soft([&] { return rectfree::classical_R(ctx.measure(), z); }, "R", z));
        t.rows.push_back(std::move(row));
    }
    write_table(t, o.output, o.format);
    return kExitOk;
}

int cmd_integral(const Options& o)
{
    const rectfree::TransformContext ctx(single_measure(o), o.lambda, o.beta);
    const auto grid = parse_grid(o.theta_grid, "--theta-grid");
    const double end = ctx.theta_domain_end();
    for (double theta : grid.points())
        if (!(std::abs(theta) < end))
            throw ConfigError("theta = " + format_cell(theta) + " is outside the open interval (-beta/K, beta/K) = (-" +
                              format_cell(end) + ", " + format_cell(end) + ")");

    Table t{{"theta", "I_quadrature", "I_closed_form", "discrepancy"}, {}};
    std::optional<rectfree::MatrixModel> model;
    long samples = o.samples > 0 ? o.samples : 200'000;
    if (o.mc) {
        const auto field = o.beta == 2 ? rectfree::Field::Complex : rectfree::Field::Real;
        model = rectfree::MatrixModel::make(model_values(ctx.measure(), o.n), resolved_m(o), field);
        for (const char* c : {"I_mc", "std_error", "n", "m", "samples"})
            t.columns.push_back(c);
    }
    const auto mc_opts = rectfree::mc_options_from_env();
    for (double theta : grid.points()) {
        const double quad = rectfree::limit_integral_I(ctx, theta);
        const double closed = rectfree::closed_form_I(ctx, theta);
        std::vector<Cell> row{theta, quad, closed, std::abs(quad - closed)};
        if (model) {
            const auto est = rectfree::estimate_In(*model, theta, samples, o.seed, mc_opts);
            row.insert(row.end(), {est.value, est.std_error, static_cast<double>(model->n),
                                   static_cast<double>(model->m), static_cast<double>(est.samples)});
        }
        t.rows.push_back(std::move(row));
    }
    write_table(t, o.output, o.format);
    return kExitOk;
}

int cmd_convolve(const Options& o)
{
    if (o.measures.size() != 2)
        throw ConfigError("convolve expects --measure twice");
    const auto mu_a = rectfree::load_measure(o.measures[0]);
    const auto mu_b = rectfree::load_measure(o.measures[1]);
    if (o.order < 1)
        throw ConfigError("--order must be at least 1");
    const auto moments = rectfree::rect_free_convolve(mu_a, mu_b, o.lambda, o.order);

    Table t{{"k", "moment"}, {}};
    std::vector<double> empirical;
    if (o.mc) {
        const int n = o.n, m = resolved_m(o);
        const long realizations = o.samples > 0 ? o.samples : 20;
        const auto a_vals = model_values(mu_a, n), b_vals = model_values(mu_b, n);
        const auto field = o.beta == 2 ? rectfree::Field::Complex : rectfree::Field::Real;
        empirical.assign(static_cast<std::size_t>(o.order) + 1, 0.0);
        for (long rep = 0; rep < realizations; ++rep) {
            rectfree::Rng rng = rectfree::substream(o.seed, static_cast<std::uint64_t>(rep));
            const Eigen::ArrayXd s2 =
                rectfree::sample_sum_singular_values(a_vals, b_vals, n, m, field, rng).array().square();
            for (int k = 1; k <= o.order; ++k)
                empirical[static_cast<std::size_t>(k)] += s2.pow(k).mean() / static_cast<double>(realizations);
        }
        t.columns.push_back("mc_moment");
        t.columns.push_back("rel_error");
    }
    for (int k = 1; k <= o.order; ++k) {
        std::vector<Cell> row{static_cast<double>(k), moments[k]};
        if (o.mc) {
            const double e = empirical[static_cast<std::size_t>(k)];
            row.push_back(e);
            row.push_back(moments[k] != 0.0 ? Cell(std::abs(e - moments[k]) / std::abs(moments[k])) : std::nullopt);
        }
        t.rows.push_back(std::move(row));
    }
    write_table(t, o.output, o.format);
    return kExitOk;
}

int cmd_cumulant(const Options& o)
{
    const auto mu = single_measure(o);
    if (o.order < 1)
        throw ConfigError("--order must be at least 1");
    const auto c = rectfree::rect_cumulants(mu, o.lambda, o.order);
    Table t{{"k", "c2k"}, {}};
    std::optional<rectfree::McEstimate> est;
    if (o.mc) {
        const auto field = o.beta == 2 ? rectfree::Field::Complex : rectfree::Field::Real;
        const auto model = rectfree::MatrixModel::make(model_values(mu, o.n), resolved_m(o), field);
        est = rectfree::estimate_classical_cumulant_c2(model, o.samples > 0 ? o.samples : 100'000, o.seed,
                                                       rectfree::mc_options_from_env());
        t.columns.push_back("mc_estimate");
        t.columns.push_back("std_error");
    }
    for (int k = 1; k <= o.order; ++k) {
        std::vector<Cell> row{static_cast<double>(k), c[k]};
        if (est) {
            row.push_back(k == 1 ? Cell(est->value) : std::nullopt);
            row.push_back(k == 1 ? Cell(est->std_error) : std::nullopt);
        }
        t.rows.push_back(std::move(row));
    }
    write_table(t, o.output, o.format);
    return kExitOk;
}

int cmd_verify(const Options& o)
{
    rectfree::AcceptanceConfig cfg;
    cfg.tolerance_scale = o.tolerance_scale;
    cfg.only = o.only;
    cfg.mc = rectfree::mc_options_from_env();
    if (o.suite_seed)
        cfg.seed = *o.suite_seed;
    const auto results = rectfree::run_acceptance(cfg);
    std::cout << rectfree::format_report(results);
    const std::string json = rectfree::report_json(results);
    if (o.format == "json" || !o.output.empty()) {
        if (o.output.empty() || o.output == "-") {
            std::cout << json << '\n';
        } else {
            std::ofstream file(o.output);
            if (!file)
                throw ConfigError("cannot write output file " + o.output);
            file << json << '\n';
        }
    }
    bool ok = !results.empty();
    for (const auto& r : results)
        ok = ok && r.passed;
    return ok ? kExitOk : kExitVerifyFailed;
}

void add_output_flags(CLI::App* cmd, Options& o)
{
    cmd->add_option("--output", o.output, "Output path (default stdout)");
    cmd->add_option("--format", o.format, "Output format")->check(CLI::IsMember({"csv", "json"}));
}

void add_model_flags(CLI::App* cmd, Options& o)
{
    cmd->add_option("--n", o.n, "Matrix rows n (singular values = n-point quantiles of |measure|)")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--m", o.m, "Matrix columns m >= n (default round(n / lambda), or 4n when lambda = 0)");
    cmd->add_option("--samples", o.samples, "Monte Carlo samples (realizations for convolve)");
    cmd->add_option("--seed", o.seed, "Seed for the Monte Carlo substreams");
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Rectangular R-transform toolkit: transforms, limits of rectangular spherical integrals, "
                 "rectangular free convolution, Monte Carlo checks"};
    app.require_subcommand(1);
    Options o;

    auto* transform = app.add_subcommand(
        "transform", "Tabulate C, H and H^-1 (columns z,C,H,H_inv[,R]) on a z-grid");
    transform->add_option("--measure", o.measures, "Measure JSON file")->required();
    transform->add_option("--lambda", o.lambda, "Ratio lambda in [0,1]")->check(CLI::Range(0.0, 1.0));
    transform->add_option("--beta", o.beta, "1 (real) or 2 (complex)")->check(CLI::IsMember({1, 2}));
    transform->add_option("--z-grid", o.z_grid, "start:stop:count, inclusive endpoints");
    transform->add_flag("--classical-R", o.classical_r, "Append the classical R-transform of the measure");
    add_output_flags(transform, o);

    auto add_integral = [&](const char* name, const char* help, bool force_mc) {
        auto* cmd = app.add_subcommand(name, help);
        cmd->add_option("--measure", o.measures, "Measure JSON file")->required();
        cmd->add_option("--lambda", o.lambda, "Ratio lambda in [0,1]")->check(CLI::Range(0.0, 1.0));
        cmd->add_option("--beta", o.beta, "1 (real) or 2 (complex)")->check(CLI::IsMember({1, 2}));
        cmd->add_option("--theta-grid", o.theta_grid, "start:stop:count inside (-beta/K, beta/K)");
        if (!force_mc)
            cmd->add_flag("--mc", o.mc, "Append Monte Carlo estimates of I_n");
        add_model_flags(cmd, o);
        add_output_flags(cmd, o);
        return cmd;
    };
    auto* integral = add_integral(
        "integral",
        "Limit I(theta): columns theta,I_quadrature,I_closed_form,discrepancy[,I_mc,std_error,n,m,samples]", false);
    integral->alias("integral-limit");
    auto* integral_mc = add_integral("integral-mc", "Same as 'integral --mc'", true);

    auto* convolve = app.add_subcommand(
        "convolve", "Moments of the squared rectangular free convolution: columns k,moment[,mc_moment,rel_error]");
    convolve->add_option("--measure", o.measures, "Measure JSON file (give twice)")->required();
    convolve->add_option("--lambda", o.lambda, "Ratio lambda in [0,1]")->check(CLI::Range(0.0, 1.0));
    convolve->add_option("--beta", o.beta, "Field for --mc-check: 1 (real) or 2 (complex)")
        ->check(CLI::IsMember({1, 2}));
    convolve->add_option("--order", o.order, "Number of moments");
    convolve->add_flag("--mc-check", o.mc, "Compare with singular laws of A + UBV");
    add_model_flags(convolve, o);
    add_output_flags(convolve, o);

    auto* cumulant = app.add_subcommand(
        "cumulant", "Rectangular free cumulants: columns k,c2k[,mc_estimate,std_error]");
    cumulant->add_option("--measure", o.measures, "Measure JSON file")->required();
    cumulant->add_option("--lambda", o.lambda, "Ratio lambda in [0,1]")->check(CLI::Range(0.0, 1.0));
    cumulant->add_option("--beta", o.beta, "Field for --mc: 1 (real) or 2 (complex)")->check(CLI::IsMember({1, 2}));
    cumulant->add_option("--order", o.order, "Number of cumulants");
    cumulant->add_flag("--mc", o.mc, "Append the Monte Carlo classical-cumulant estimate of c_2");
    add_model_flags(cumulant, o);
    add_output_flags(cumulant, o);

    auto* verify = app.add_subcommand("verify", "Run the acceptance suite; exit 1 if any criterion fails");
    verify->add_option("--only", o.only, "Criterion ids to run (e.g. --only 2 8)");
    verify->add_option("--tolerance-scale", o.tolerance_scale, "Multiply every tolerance (test hook)");
    verify->add_option("--seed", o.suite_seed, "Override the suite seed");
    add_output_flags(verify, o);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitConfig;
    }

    try {
        if (*transform)
            return cmd_transform(o);
        if (*integral)
            return cmd_integral(o);
        if (*integral_mc) {
            o.mc = true;
            return cmd_integral(o);
        }
        if (*convolve)
            return cmd_convolve(o);
        if (*cumulant)
            return cmd_cumulant(o);
        if (*verify)
            return cmd_verify(o);
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const rectfree::InvalidInput& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const rectfree::DomainError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitConfig;
    }
    return kExitConfig;
}
