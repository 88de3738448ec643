// betalike: posterior distributions of probabilities for reliability and
// count models, with subcommands for density tables, moment/cumulant
// summaries, MaxEnt approximations, and Bayesian model selection.

#include <cmath>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "betalike/cumulants.hpp"
#include "betalike/data.hpp"
#include "betalike/errors.hpp"
#include "betalike/evidence.hpp"
#include "betalike/maxent.hpp"
#include "betalike/parallel.hpp"
#include "betalike/posterior.hpp"
#include "betalike/quadrature.hpp"
#include "betalike/report.hpp"
#include "betalike/theta_density.hpp"

namespace {

using namespace betalike;

struct CommonOpts {
    std::string model;
    std::string data_path;
    std::optional<double> tau;
    std::optional<double> z;
    std::optional<long long> m;
    std::optional<double> total_time;
    std::optional<double> prior_t;
    std::size_t grid_n = 0;
    double tol = 1e-9;
    std::string out;
};

void require_flag(bool present, const std::string& flag, const std::string& model) {
    if (!present)
        throw ValidationError("flag " + flag + " is required for model '" + model + "'");
}

GridSpec posterior_spec(const CommonOpts& o, const std::vector<double>& b1,
                        const std::vector<double>& b2) {
    GridSpec spec;
    if (o.grid_n > 0) spec.n1 = spec.n2 = o.grid_n;
    if (b1.size() == 2) spec.bounds1 = std::make_pair(b1[0], b1[1]);
    if (b2.size() == 2) spec.bounds2 = std::make_pair(b2[0], b2[1]);
    return spec;
}

void check_normalized(const ThetaDensity& d) {
    const double mass = trapezoid(d.grid);
    if (std::fabs(mass - 1.0) > 1e-6)
        throw NumericalError("emitted density failed the normalization check", mass, 1e-6);
}

void emit_density_outputs(const ThetaDensity& d, const MomentSet& m, const CumulantSet& c,
                          const std::string& out_base) {
    check_normalized(d);
    const std::string json = density_summary_json(d, m, c);
    atomic_write(out_base + ".tsv", theta_density_tsv(d));
    atomic_write(out_base + ".json", json + "\n");
    std::cout << json << "\n";
}

// Moments of the closed-form exponential theta density: E[theta^j] is the
// Gamma moment-generating function at -j tau.
MomentSet exponential_theta_moments(const ExponentialPosterior& p, double tau) {
    MomentSet m;
    const double R = p.total_time;
    m.m1 = std::pow(R / (R + tau), p.shape());
    m.m2 = std::pow(R / (R + 2.0 * tau), p.shape());
    m.m3 = std::pow(R / (R + 3.0 * tau), p.shape());
    m.m4 = std::pow(R / (R + 4.0 * tau), p.shape());
    return m;
}

int cmd_density(const CommonOpts& o, const std::vector<double>& b1, const std::vector<double>& b2) {
    const std::string out_base = o.out.empty() ? "betalike_density" : o.out;
    ThetaDensity d;
    MomentSet mom;
    if (o.model == "exponential") {
        require_flag(o.tau.has_value(), "--tau", o.model);
        auto data = load_reliability_csv(o.data_path);
        if (o.prior_t) data.prior_guess_t = *o.prior_t;
        const auto post = build_exponential(data);
        d = exponential_theta_density(post, *o.tau);
        mom = exponential_theta_moments(post, *o.tau);
    } else if (o.model == "weibull") {
        require_flag(o.tau.has_value(), "--tau", o.model);
        auto data = load_reliability_csv(o.data_path);
        if (o.prior_t) data.prior_guess_t = *o.prior_t;
        const auto post = build_weibull(data, posterior_spec(o, b1, b2));
        d = weibull_theta_density(post, *o.tau);
        mom = grid_moments(d.grid);
    } else if (o.model == "logistic") {
        require_flag(o.z.has_value(), "--z", o.model);
        const auto data = load_binary_csv(o.data_path);
        const auto post = build_logistic(data, posterior_spec(o, b1, b2));
        d = logistic_theta_density(post, *o.z);
        mom = grid_moments(d.grid);
    } else {
        throw ValidationError("density: unknown --model '" + o.model +
                              "' (expected logistic, exponential, or weibull)");
    }
    emit_density_outputs(d, mom, moments_to_cumulants(mom), out_base);
    return 0;
}

MomentSet compute_count_moments(const CommonOpts& o, std::string& model_out) {
    require_flag(o.tau.has_value(), "--tau", o.model);
    require_flag(o.m.has_value(), "--m", o.model);
    if (o.model == "poisson" || o.model == "cumulative-poisson") {
        require_flag(o.total_time.has_value(), "--total-time", o.model);
        auto data = load_count_csv(o.data_path, *o.tau, o.total_time);
        if (o.prior_t) data.prior_guess_t = *o.prior_t;
        const auto post = build_poisson(data);
        model_out = o.model;
        return o.model == "poisson" ? poisson_theta_moments(post, *o.tau, *o.m)
                                    : cumulative_poisson_theta_moments(post, *o.tau, *o.m);
    }
    if (o.model == "poisson-regression") {
        require_flag(o.z.has_value(), "--z", o.model);
        auto data = load_count_csv(o.data_path, *o.tau);
        GridSpec spec;
        if (o.grid_n > 0) spec.n1 = spec.n2 = o.grid_n;
        const auto post = build_poisson_regression(data, spec);
        const auto reg = poisson_regression_theta_moments(post, *o.z, *o.tau, *o.m);
        if (reg.boundary_warning)
            std::cerr << "warning: posterior boundary mass " << fmt17(reg.boundary_mass) << "\n";
        model_out = o.model;
        return reg.moments;
    }
    throw ValidationError("unknown --model '" + o.model +
                          "' (expected poisson, cumulative-poisson, or poisson-regression)");
}

int cmd_moments(const CommonOpts& o) {
    std::string model;
    const MomentSet mom = compute_count_moments(o, model);
    const CumulantSet cum = moments_to_cumulants(mom);
    const std::string json = moments_json(model, mom, cum);
    if (!o.out.empty()) atomic_write(o.out, json + "\n");
    std::cout << json << "\n";
    return 0;
}

int cmd_maxent(const CommonOpts& o) {
    std::string model;
    const MomentSet mom = compute_count_moments(o, model);
    const CumulantSet cum = moments_to_cumulants(mom);
    const auto fit = maxent_theta_density_full(cum);
    ThetaDensity d = fit.density;
    d.query.tau = o.tau;
    d.query.m = o.m;
    check_normalized(d);

    const std::string out_base = o.out.empty() ? "betalike_maxent" : o.out;
    const std::string json = maxent_json(model, fit.solution);
    atomic_write(out_base + ".tsv", theta_density_tsv(d));
    atomic_write(out_base + ".json", json + "\n");
    std::cout << json << "\n";
    return 0;
}

int cmd_select(const CommonOpts& o, const std::vector<double>& k_range, double prior_m1,
               double prior_m2) {
    if (k_range.size() != 2) throw ValidationError("--k-range requires two values: lo hi");
    const auto data = load_reliability_csv(o.data_path);
    PriorRange range{k_range[0], k_range[1]};
    const EvidenceReport report = model_posterior(data, range, prior_m1, prior_m2);
    const std::string json = evidence_json(report);
    if (!o.out.empty()) atomic_write(o.out, json + "\n");
    std::cout << json << "\n";
    return 0;
}

int cmd_poisson_like(const CommonOpts& o, const std::vector<double>& b1,
                     const std::vector<double>& b2, std::size_t cells) {
    require_flag(o.tau.has_value(), "--tau", "poisson-like");
    require_flag(o.m.has_value(), "--m", "poisson-like");
    auto data = load_reliability_csv(o.data_path);
    if (o.prior_t) data.prior_guess_t = *o.prior_t;
    GridSpec spec = posterior_spec(o, b1, b2);
    const auto post = build_weibull(data, spec);
    const auto result = poisson_like_theta_distribution(post, *o.tau, *o.m, cells);
    for (const auto& w : result.warnings) std::cerr << "warning: " << w << "\n";
    check_normalized(result.density);

    const MomentSet push = result.mixture.pushforward_moments();
    const CumulantSet cum = moments_to_cumulants(push);
    const std::string out_base = o.out.empty() ? "betalike_poisson_like" : o.out;
    JsonObject obj;
    obj.field("model", std::string("poisson-like"))
        .field("tau", *o.tau)
        .field("m", static_cast<long long>(*o.m))
        .field("cells", static_cast<long long>(result.mixture.weights.size()))
        .raw("pushforward_moments", json_array({push.m1, push.m2, push.m3, push.m4}))
        .field("mean", cum.mu)
        .field("sd", cum.sigma)
        .field("gamma", cum.gamma)
        .field("kappa", cum.kappa)
        .field("normalizer", result.density.normalizer);
    const std::string json = obj.str();
    atomic_write(out_base + ".tsv", theta_density_tsv(result.density));
    atomic_write(out_base + ".json", json + "\n");
    std::cout << json << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    betalike::par::init_from_env();

    CLI::App app{"Posterior distributions of probabilities for reliability and count models"};
    app.require_subcommand(1);

    CommonOpts o;
    std::vector<double> bounds1, bounds2, k_range{0.2, 5.0};
    double prior_m1 = 0.5, prior_m2 = 0.5;
    std::size_t cells = 32;

    auto add_common = [&](CLI::App* cmd, bool with_model) {
        if (with_model) cmd->add_option("--model", o.model, "probability model")->required();
        cmd->add_option("--data", o.data_path, "input CSV")->required();
        cmd->add_option("--tau", o.tau, "query window / mission time");
        cmd->add_option("--z", o.z, "predictor value for theta");
        cmd->add_option("--m", o.m, "event count for theta");
        cmd->add_option("--total-time", o.total_time, "total observation time T");
        cmd->add_option("--prior-t", o.prior_t, "prior life-time guess override");
        cmd->add_option("--grid-n", o.grid_n, "posterior grid points per axis");
        cmd->add_option("--tol", o.tol, "quadrature relative tolerance");
        cmd->add_option("--out", o.out, "output path base");
        cmd->add_option("--bounds1", bounds1, "axis-1 posterior bounds: lo hi")->expected(2);
        cmd->add_option("--bounds2", bounds2, "axis-2 posterior bounds: lo hi")->expected(2);
    };

    auto* density = app.add_subcommand("density", "tabulate a theta density");
    add_common(density, true);
    auto* moments = app.add_subcommand("moments", "moments and cumulants of theta");
    add_common(moments, true);
    auto* maxent = app.add_subcommand("maxent", "fourth-order MaxEnt approximation of theta");
    add_common(maxent, true);
    auto* select = app.add_subcommand("select", "Bayesian model selection");
    add_common(select, false);
    select->add_option("--k-range", k_range, "shape prior range: lo hi")->expected(2);
    select->add_option("--prior-m1", prior_m1, "prior probability of the exponential model");
    select->add_option("--prior-m2", prior_m2, "prior probability of the weibull model");
    auto* plike = app.add_subcommand("poisson-like", "theta distribution for weibull waiting times");
    add_common(plike, false);
    plike->add_option("--cells", cells, "posterior partition cells per axis");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    }

    try {
        if (density->parsed()) return cmd_density(o, bounds1, bounds2);
        if (moments->parsed()) return cmd_moments(o);
        if (maxent->parsed()) return cmd_maxent(o);
        if (select->parsed()) return cmd_select(o, k_range, prior_m1, prior_m2);
        if (plike->parsed()) return cmd_poisson_like(o, bounds1, bounds2, cells);
    } catch (const betalike::ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const betalike::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const betalike::NumericalError& e) {
        std::cerr << "numerical error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
