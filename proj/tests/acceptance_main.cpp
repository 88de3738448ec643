// Acceptance suite: runs every library-level acceptance criterion at its
// stated tolerance and prints one PASS/FAIL line per criterion.
//
// Usage: acceptance [path-to-cli-binary]

#include <array>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "betalike/cumulants.hpp"
#include "betalike/errors.hpp"
#include "betalike/evidence.hpp"
#include "betalike/maxent.hpp"
#include "betalike/posterior.hpp"
#include "betalike/quadrature.hpp"
#include "betalike/theta_density.hpp"
#include "oracles.hpp"

using namespace betalike;

namespace {

struct Outcome {
    bool pass;
    std::string detail;
};

std::string g_cli_path;

Outcome check(bool pass, const std::string& detail) { return Outcome{pass, detail}; }

std::string fmt(double v) {
    std::ostringstream ss;
    ss.precision(6);
    ss << v;
    return ss.str();
}

// ---------------------------------------------------------------- criterion 1
Outcome beta_collapse() {
    double worst = 0.0;
    for (int n = 2; n <= 6; ++n)
        for (int r = 1; r <= n - 1; ++r) {
            BinaryOutcomeData d;
            d.success_predictors.assign(r, 0.4);
            d.failure_predictors.assign(n - r, 0.4);
            const auto density = logistic_theta_density(build_logistic(d), 0.4);
            for (std::size_t i = 0; i < density.grid.points.size(); ++i) {
                const double ref =
                    oracles::beta_pdf(double(r), double(n - r), density.grid.points[i]);
                worst = std::max(worst, std::fabs(density.grid.values[i] - ref));
            }
        }
    return check(worst <= 1e-3, "max sup-norm " + fmt(worst) + " over all (r, n-r), n<=6 (tol 1e-3)");
}

// ---------------------------------------------------------------- criterion 2
Outcome exponential_mean_identity() {
    double worst = 0.0;
    for (int r : {0, 2, 5})
        for (double T : {1.0, 5.0, 20.0})
            for (double tau : {0.5, 1.0, 2.0}) {
                ExponentialPosterior p;
                p.r = r;
                p.lambda_power = r;
                p.total_time = T;
                const double quad = integrate_1d(
                    [&](double th) { return th * exponential_theta_pdf(p, tau, th); }, 0.0, 1.0,
                    1e-13);
                worst = std::max(worst, std::fabs(quad - exponential_theta_mean(p, tau)));
            }
    if (worst > 1e-9) return check(false, "sweep error " + fmt(worst) + " (tol 1e-9)");

    // qualitative limits: a short test barely moves the prior-driven mean,
    // an overwhelming test makes the prior irrelevant
    ReliabilityData prior_only;
    prior_only.survivals = {1e-9};
    prior_only.prior_guess_t = 100.0;
    ReliabilityData prior_free;
    prior_free.survivals = {1e5};
    prior_free.prior_guess_t = 100.0;
    ExponentialPosterior prior_ref;
    prior_ref.r = 0;
    prior_ref.lambda_power = 0;
    prior_ref.total_time = 100.0;
    ExponentialPosterior data_ref = prior_ref;
    data_ref.total_time = 1e5;
    const double tau = 5.0;
    const bool prior_driven = std::fabs(exponential_theta_mean(build_exponential(prior_only), tau) -
                                        exponential_theta_mean(prior_ref, tau)) < 1e-9;
    const bool data_driven = std::fabs(exponential_theta_mean(build_exponential(prior_free), tau) -
                                       exponential_theta_mean(data_ref, tau)) < 1e-6;
    // monotone: more observed time -> higher survival odds; longer mission -> lower
    ExponentialPosterior a = prior_ref, b = prior_ref;
    a.total_time = 10.0;
    b.total_time = 20.0;
    const bool monotone = exponential_theta_mean(a, tau) < exponential_theta_mean(b, tau) &&
                          exponential_theta_mean(a, 2.0 * tau) < exponential_theta_mean(a, tau);
    return check(prior_driven && data_driven && monotone,
                 "sweep error " + fmt(worst) + " (tol 1e-9); prior/data limits and monotonicity " +
                     (prior_driven && data_driven && monotone ? "hold" : "violated"));
}

// ---------------------------------------------------------------- criterion 3
Outcome weibull_degeneracy() {
    ReliabilityData rd;
    rd.failures = {1.0, 2.0};
    rd.survivals = {3.0};
    rd.prior_guess_t = 1.0;
    GridSpec spec;
    spec.bounds1 = {1.0 - 1e-4, 1.0 + 1e-4};
    const auto wd = weibull_theta_density(build_weibull(rd, spec), 1.0);
    const auto ed = exponential_theta_density(build_exponential(rd), 1.0);
    double sup = 0.0;
    for (std::size_t i = 0; i < wd.grid.points.size(); ++i)
        sup = std::max(sup, std::fabs(wd.grid.values[i] - ed.grid.values[i]));

    ReliabilityData single;
    single.survivals = {7.0};
    const bool statistic = weibull_power_time(single, 0.0, 2.0) == 49.0;
    return check(sup <= 2e-3 && statistic,
                 "pinned-kappa sup-norm " + fmt(sup) + " (tol 2e-3); T(D,t,kappa=2) == 49 " +
                     (statistic ? "exact" : "WRONG"));
}

// ---------------------------------------------------------------- criterion 4
Outcome poisson_closed_forms() {
    double worst = 0.0;
    const double tau = 1.0, R = 5.0;
    for (long long m = 0; m <= 4; ++m)
        for (int n = 0; n <= 6; ++n) {
            PoissonPosterior p;
            p.lambda_power = n;
            p.rate = R;
            const auto mm = poisson_theta_moments(p, tau, m);
            const double closed[4] = {mm.m1, mm.m2, mm.m3, mm.m4};
            for (int j = 1; j <= 4; ++j) {
                auto f = [&](double lam) {
                    const double lt = lam * tau;
                    const double pois =
                        std::exp(m * std::log(lt) - lt - std::lgamma(double(m) + 1.0));
                    return std::pow(pois, j) * oracles::gamma_pdf(n + 1.0, R, lam);
                };
                const double oracle = oracles::boost_integrate(f, 0.0, 40.0, 1e-14);
                worst = std::max(worst, std::fabs(closed[j - 1] - oracle) / oracle);
            }
        }
    return check(worst <= 1e-8, "max relative error " + fmt(worst) + " over (m,n)<=(4,6) (tol 1e-8)");
}

// ---------------------------------------------------------------- criterion 5
Outcome erlang_poisson_equivalence() {
    double worst = 0.0;
    for (int n = 0; n <= 10; ++n)
        for (double lt : {0.1, 0.5, 1.0, 2.0, 5.0}) {
            double tail = 1.0;
            for (int i = 0; i <= n; ++i) tail -= oracles::poisson_pmf(i, lt);
            worst = std::max(worst, std::fabs(tail - oracles::regularized_gamma_p(n + 1.0, lt)));
        }
    if (worst > 1e-12) return check(false, "identity error " + fmt(worst) + " (tol 1e-12)");

    std::function<double(int, double)> volume = [&](int m, double tau) -> double {
        if (m == 0) return 1.0;
        return integrate_1d([&](double t) { return volume(m - 1, tau - t); }, 0.0, tau, 1e-11);
    };
    double vworst = 0.0;
    for (int m = 1; m <= 5; ++m) {
        const double tau = 1.3;
        vworst = std::max(vworst, std::fabs(volume(m, tau) -
                                            std::exp(m * std::log(tau) - std::lgamma(m + 1.0))));
    }
    return check(vworst <= 1e-9, "identity error " + fmt(worst) + " (tol 1e-12); simplex volume error " +
                                     fmt(vworst) + " (tol 1e-9)");
}

// ---------------------------------------------------------------- criterion 6
Outcome maxent_solver() {
    const auto g = solve_maxent(CumulantSet{0.0, 1.0, 0.0, 3.0}, -6.0, 6.0);
    double phi_err = std::fabs(g.phi[0]);
    phi_err = std::max(phi_err, std::fabs(g.phi[1] + 0.5));
    phi_err = std::max(phi_err, std::fabs(g.phi[2]));
    phi_err = std::max(phi_err, std::fabs(g.phi[3]));
    if (phi_err > 1e-4) return check(false, "gaussian phi error " + fmt(phi_err) + " (tol 1e-4)");

    double self = 0.0;
    const std::vector<std::array<double, 4>> cases = {
        {0.0, 3.0, -6.0, 6.0}, {1.0, 4.5, -2.0, 6.0}, {0.5, 3.5, -5.0, 6.0}, {2.0, 9.0, -1.0, 6.0}};
    for (const auto& c : cases) {
        const auto s = solve_maxent(CumulantSet{0.0, 1.0, c[0], c[1]}, c[2], c[3]);
        const double targets[4] = {0.0, 1.0, c[0], c[1]};
        for (int j = 1; j <= 4; ++j) {
            const double got = oracles::boost_integrate(
                [&](double x) { return std::pow(x, j) * s.pdf_std(x); }, s.support_lo,
                s.support_hi, 1e-12);
            self = std::max(self, std::fabs(got - targets[j - 1]));
        }
    }
    return check(self <= 1e-4, "gaussian phi error " + fmt(phi_err) +
                                   "; worst self-consistency residual " + fmt(self) + " (tol 1e-4)");
}

// ---------------------------------------------------------------- criterion 7
Outcome gamma41_analogue() {
    // corrected propagation: excess kurtosis scales as 1/N. The naive rule
    // full_kappa/N + 3 is inconsistent already at N = 1 (it maps 9 to 12).
    const auto single = weibull_waiting_cumulants(1.0, 1.0);
    const auto four = sum_cumulants(single, 4);
    const bool rule_ok = four.kappa == 4.5 && sum_cumulants(single, 1).kappa == 9.0;
    const double naive_at_1 = single.kappa / 1.0 + 3.0;  // = 12, not 9
    if (!rule_ok || naive_at_1 == single.kappa)
        return check(false, "cumulant propagation rule wrong");

    const auto pd = maxent_positive_density(four);
    double sup = 0.0;
    for (double q = 0.5; q <= 10.0; q += 0.005)
        sup = std::max(sup, std::fabs(pd.solution.pdf(q) - oracles::gamma_pdf(4.0, 1.0, q)));
    return check(sup <= 3e-2, "sup-norm vs Gamma(4,1) on [0.5,10] " + fmt(sup) +
                                  " (tol 3e-2); corrected kurtosis rule verified at N=1 and N=4");
}

// ---------------------------------------------------------------- criterion 8
Outcome poisson_like_vs_exact() {
    double worst = 0.0;
    for (double lt : {0.5, 1.0, 2.0})
        for (long long m = 0; m <= 3; ++m) {
            const double approx = poisson_like_pmf(1.0, lt, 1.0, m);
            worst = std::max(worst, std::fabs(approx - oracles::poisson_pmf(m, lt)));
        }
    return check(worst <= 3e-2,
                 "max pmf error " + fmt(worst) + " for m<=3, lambda*tau<=2 (tol 3e-2)");
}

// ---------------------------------------------------------------- criterion 9
Outcome evidence_checks() {
    ReliabilityData d;
    d.failures = {1.0, 2.0};
    d.survivals = {3.0};
    const auto even = model_posterior(d, PriorRange{1.0 - 1e-4, 1.0 + 1e-4});
    const double dev = std::fabs(even.models[0].posterior - 0.5);
    if (dev > 2e-3) return check(false, "near-degenerate posterior off by " + fmt(dev));

    ReliabilityData shaped;
    shaped.failures.assign(oracles::weibull_shape3_fixture().begin(),
                           oracles::weibull_shape3_fixture().end());
    const PriorRange range{0.5, 5.0};
    const auto report = model_posterior(shaped, range);
    const double p2 = report.models[1].posterior;

    // quadrature oracle with an independent midpoint integrator
    double slogx = 0.0;
    for (double x : shaped.failures) slogx += std::log(x);
    const double r = double(shaped.failures.size());
    const int N = 20001;
    const double h = (range.hi - range.lo) / N;
    double gmax = -1e300;
    std::vector<double> g(N);
    for (int i = 0; i < N; ++i) {
        const double k = range.lo + (i + 0.5) * h;
        double sk = 0.0;
        for (double x : shaped.failures) sk += std::pow(x, k);
        g[i] = (r - 2.0) * std::log(k) + (k - 1.0) * slogx - r * std::log(sk);
        gmax = std::max(gmax, g[i]);
    }
    double sum = 0.0;
    for (int i = 0; i < N; ++i) sum += h * std::exp(g[i] - gmax);
    const double core2 = std::lgamma(r) + range.log_normalizer() + gmax + std::log(sum);
    const double oracle_p2 = 1.0 / (1.0 + std::exp(exponential_evidence_core(shaped) - core2));

    bool refused = false;
    try {
        model_posterior(d, PriorRange{0.0, std::numeric_limits<double>::infinity()});
    } catch (const ValidationError&) {
        refused = true;
    }
    const bool ok = p2 > 0.5 && std::fabs(p2 - oracle_p2) < 1e-6 && refused;
    return check(ok, "near-degenerate dev " + fmt(dev) + " (tol 2e-3); p(M2)=" + fmt(p2) +
                         " vs oracle " + fmt(oracle_p2) + "; improper prior refused: " +
                         (refused ? "yes" : "NO"));
}

// --------------------------------------------------------------- criterion 10
Outcome global_checks() {
    double worst = 0.0;
    {
        BinaryOutcomeData d;
        d.success_predictors = {0.5, 1.0};
        d.failure_predictors = {-0.5};
        const auto den = logistic_theta_density(build_logistic(d), 0.2);
        worst = std::max(worst, std::fabs(trapezoid(den.grid) - 1.0));
    }
    {
        ReliabilityData rd;
        rd.failures = {1.0, 2.0};
        rd.survivals = {3.0};
        rd.prior_guess_t = 1.0;
        worst = std::max(worst,
                         std::fabs(trapezoid(exponential_theta_density(build_exponential(rd), 1.0).grid) - 1.0));
        worst = std::max(worst,
                         std::fabs(trapezoid(weibull_theta_density(build_weibull(rd), 1.0).grid) - 1.0));
        GridSpec spec;
        spec.bounds1 = {0.9, 1.4};
        const auto pl = poisson_like_theta_distribution(build_weibull(rd, spec), 1.0, 1, 12);
        worst = std::max(worst, std::fabs(trapezoid(pl.density.grid) - 1.0));
    }
    {
        PoissonPosterior p;
        p.lambda_power = 3.0;
        p.rate = 5.0;
        const auto d = maxent_theta_density(moments_to_cumulants(poisson_theta_moments(p, 1.0, 1)));
        worst = std::max(worst, std::fabs(trapezoid(d.grid) - 1.0));
    }
    if (worst > 1e-6)
        return check(false, "worst normalization deviation " + fmt(worst) + " (tol 1e-6)");

    if (g_cli_path.empty())
        return check(true, "worst normalization deviation " + fmt(worst) +
                               " (tol 1e-6); CLI determinism skipped (no binary path given)");

    // CLI byte-determinism: identical invocations, identical bytes
    const std::string csv = "acceptance_rel.csv";
    {
        std::FILE* f = std::fopen(csv.c_str(), "w");
        std::fputs("kind,time\nfailure,1.0\nfailure,2.0\nsurvival,3.0\nprior_guess,1.0\n", f);
        std::fclose(f);
    }
    auto run_once = [&](const std::string& out) {
        const std::string cmd = g_cli_path + " density --model weibull --tau 1 --data " + csv +
                                " --out " + out + " 2>&1";
        std::string captured;
        std::array<char, 4096> buf{};
        FILE* pipe = popen(cmd.c_str(), "r");
        while (pipe && std::fgets(buf.data(), buf.size(), pipe)) captured += buf.data();
        if (pipe) pclose(pipe);
        return captured;
    };
    auto slurp = [](const std::string& p) {
        std::FILE* f = std::fopen(p.c_str(), "rb");
        std::string s;
        std::array<char, 4096> buf{};
        std::size_t n;
        while (f && (n = std::fread(buf.data(), 1, buf.size(), f)) > 0) s.append(buf.data(), n);
        if (f) std::fclose(f);
        return s;
    };
    const std::string out1 = run_once("acceptance_run_a");
    const std::string out2 = run_once("acceptance_run_b");
    const bool deterministic = out1 == out2 &&
                               slurp("acceptance_run_a.tsv") == slurp("acceptance_run_b.tsv") &&
                               slurp("acceptance_run_a.json") == slurp("acceptance_run_b.json") &&
                               !slurp("acceptance_run_a.tsv").empty();
    return check(deterministic, "worst normalization deviation " + fmt(worst) +
                                    " (tol 1e-6); CLI byte-determinism: " +
                                    (deterministic ? "identical" : "MISMATCH"));
}

}  // namespace

int main(int argc, char** argv) {
    if (argc > 1) g_cli_path = argv[1];

    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
        {"beta collapse of the logistic pipeline", beta_collapse},
        {"exponential mean identity", exponential_mean_identity},
        {"weibull-to-exponential degeneracy", weibull_degeneracy},
        {"poisson moment closed forms", poisson_closed_forms},
        {"erlang/poisson equivalence + simplex volume", erlang_poisson_equivalence},
        {"maxent solver gaussian + self-consistency", maxent_solver},
        {"maxent vs exact Gamma(4,1) waiting-time sum", gamma41_analogue},
        {"poisson-like pmf vs exact poisson", poisson_like_vs_exact},
        {"evidence and model selection", evidence_checks},
        {"global normalization + CLI determinism", global_checks},
    };

    int failures = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Outcome o;
        try {
            o = criteria[i].second();
        } catch (const std::exception& e) {
            o = Outcome{false, std::string("exception: ") + e.what()};
        }
        if (!o.pass) ++failures;
        std::printf("%s  %2zu %s: %s\n", o.pass ? "PASS" : "FAIL", i + 1,
                    criteria[i].first.c_str(), o.detail.c_str());
    }
    if (failures) std::printf("%d criterion(s) failed\n", failures);
    return failures == 0 ? 0 : 1;
}
