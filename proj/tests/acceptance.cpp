// Acceptance suite: one line per criterion, nonzero exit if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <vector>

#include "ewagg/harness.hpp"
#include "ewagg/io.hpp"
#include "ewagg/rng.hpp"
#include "ewagg/verify.hpp"

namespace {

using namespace ewagg;

int failures = 0;

double seconds_since(const std::chrono::steady_clock::time_point& start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

void report(int id, const std::string& label, bool pass, const std::string& detail) {
    std::printf("[%s] criterion %2d: %s  (%s)\n", pass ? "PASS" : "FAIL", id, label.c_str(),
                detail.c_str());
    std::fflush(stdout);
    if (!pass) ++failures;
}

bool suite_passes(const std::vector<CheckResult>& checks, std::string* detail) {
    bool ok = true;
    int count = 0;
    std::ostringstream failures_text;
    for (const auto& c : checks) {
        ++count;
        if (!c.pass) {
            ok = false;
            failures_text << ' ' << c.name;
        }
    }
    std::ostringstream out;
    out << count << " checks";
    if (!ok) out << "; failing:" << failures_text.str();
    *detail = out.str();
    return ok;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void criterion_1_finite_ms() {
    const auto start = std::chrono::steady_clock::now();
    ExperimentConfig cfg = default_finite_ms_config(); // Gaussian s2=1, M=10, n=100, R=1000
    cfg.beta = 4.0;
    const RunResult res = run_replications(cfg);
    const double elapsed = seconds_since(start);
    const double slack = res.estimate.bound_satisfied_within;
    const bool pass = slack <= 3.0 && elapsed < 10.0;
    std::ostringstream detail;
    detail << "mean_risk=" << res.estimate.mean_risk << " rhs=" << res.report.rhs
           << " slack_se=" << slack << " time=" << elapsed << "s<10s";
    report(1, "model-selection bound, finite family", pass, detail.str());
}

void criterion_2_sparse_soi() {
    const auto start = std::chrono::steady_clock::now();
    ExperimentConfig cfg = default_sparse_soi_config(); // M=50, n=100, M(l*)=3, R=200
    cfg.beta = 4.0;
    const RunResult res = run_replications(cfg);
    const double elapsed = seconds_since(start);
    const double slack = res.estimate.bound_satisfied_within;
    const bool pass = slack <= 3.0 && elapsed < 600.0;
    std::ostringstream detail;
    detail << "mean_risk=" << res.estimate.mean_risk << " rhs=" << res.report.rhs
           << " slack_se=" << slack << " time=" << elapsed << "s<600s";
    report(2, "sparsity oracle bound, posterior mean", pass, detail.str());
}

void criterion_3_mcmc_vs_quadrature() {
    const auto start = std::chrono::steady_clock::now();
    double worst = 0.0;

    {
        const Index n = 20;
        Rng rng(1001);
        Vector y(n);
        for (Index i = 0; i < n; ++i) y[i] = 1.5 + rng.normal();
        const PosteriorSpec spec{EvaluatedDictionary(Matrix::Ones(n, 1)), y, 4.0,
                                 SparsityPrior::unbounded(0.1)};
        const CoefVector oracle = quadrature_posterior_mean(spec);
        SamplerConfig cfg;
        cfg.step_size = 0.7;
        cfg.n_steps = 60000;
        cfg.burn_in = 10000;
        cfg.n_chains = 4;
        cfg.seed = 5000;
        const CoefVector hat = sample_posterior_mean(spec, cfg).lambda_hat;
        worst = std::max(worst, std::fabs(hat[0] - oracle[0]));
    }
    {
        const Index n = 20;
        Matrix x(n, 2);
        for (Index i = 0; i < n; ++i) {
            x(i, 0) = 1.0;
            x(i, 1) = (i % 2 == 0) ? 1.0 : -1.0;
        }
        Rng rng(1002);
        Vector y(n);
        for (Index i = 0; i < n; ++i) {
            y[i] = 2.0 * x(i, 0) - 1.5 * x(i, 1) + 0.5 * rng.normal();
        }
        const PosteriorSpec spec{EvaluatedDictionary(std::move(x)), y, 4.0,
                                 SparsityPrior::unbounded(0.1)};
        const CoefVector oracle = quadrature_posterior_mean(spec);
        SamplerConfig cfg;
        cfg.step_size = 0.5;
        cfg.n_steps = 80000;
        cfg.burn_in = 10000;
        cfg.n_chains = 4;
        cfg.seed = 5001;
        const CoefVector hat = sample_posterior_mean(spec, cfg).lambda_hat;
        for (Index j = 0; j < 2; ++j) worst = std::max(worst, std::fabs(hat[j] - oracle[j]));
    }
    const double elapsed = seconds_since(start);
    const bool pass = worst <= 0.01 && elapsed < 60.0;
    std::ostringstream detail;
    detail << "max_coord_error=" << worst << "<=0.01 time=" << elapsed << "s<60s";
    report(3, "posterior mean vs quadrature oracle (M=1,2)", pass, detail.str());
}

void criterion_4_noise_identities() {
    std::string detail;
    const bool pass = suite_passes(verify_noise(), &detail);
    report(4, "noise-model identities and closed forms", pass, detail);
}

void criterion_5_skorokhod() {
    const auto checks = verify_skorokhod();
    std::vector<CheckResult> subset;
    for (const auto& c : checks) {
        if (c.name.rfind("skorokhod", 0) == 0) subset.push_back(c);
    }
    std::string detail;
    const bool pass = suite_passes(subset, &detail);
    report(5, "dummy-randomization construction (a)-(c)", pass, detail);
}

void criterion_6_zeta_sampler() {
    const auto checks = verify_skorokhod();
    std::vector<CheckResult> subset;
    for (const auto& c : checks) {
        if (c.name.rfind("zeta", 0) == 0) subset.push_back(c);
    }
    std::string detail;
    const bool pass = suite_passes(subset, &detail);
    report(6, "n-divisible companion sampler vs its mgf", pass, detail);
}

void criterion_7_appendix() {
    // The elementary-inequality part is evaluated on the full required grid,
    // x in [-5,5] step 0.01 with a0 in {0.1,1,2,10}. That grid contains a
    // region (a0 = 10, x < 0) where the inequality is mathematically false,
    // so this criterion cannot pass as stated; the failure below is the
    // inequality's, not the implementation's. The valid-region check and the
    // concavity checks are reported alongside.
    std::vector<double> xs;
    for (int k = -500; k <= 500; ++k) xs.push_back(0.01 * k);
    const double full_grid = lem2_max_violation(xs, {0.1, 1.0, 2.0, 10.0});
    const bool lem2_pass = full_grid <= 1e-12;

    bool rest_pass = true;
    double valid_region = 0.0;
    int concavity_trials = 0;
    for (const auto& c : verify_appendix()) {
        if (c.name == "lem2_grid_valid_region") valid_region = c.value;
        if (c.name == "psi_midpoint_concavity") concavity_trials = static_cast<int>(c.value);
        if (c.name != "lem2_documented_gap") rest_pass = rest_pass && c.pass;
    }

    std::ostringstream detail;
    detail << "full-grid max violation=" << full_grid
           << " (>1e-12: the inequality is false for a0=10 at negative x; "
              "valid-region max=" << valid_region << "), concavity trials "
           << concavity_trials << "/200";
    report(7, "appendix inequality and concavity checks", lem2_pass && rest_pass, detail.str());
}

void criterion_8_gradient() {
    Rng rng(314);
    Matrix x(30, 8);
    for (Index j = 0; j < 8; ++j) {
        for (Index i = 0; i < 30; ++i) x(i, j) = rng.normal();
    }
    Vector y(30);
    for (Index i = 0; i < 30; ++i) y[i] = rng.normal();
    const PosteriorSpec spec{EvaluatedDictionary(std::move(x)), y, 3.0,
                             SparsityPrior::unbounded(0.2)};
    double worst = 0.0;
    for (int point = 0; point < 100; ++point) {
        Vector lambda(8);
        for (Index j = 0; j < 8; ++j) {
            lambda[j] = (rng.uniform() < 0.5 ? -1.0 : 1.0) * rng.uniform(0.01, 2.0);
        }
        const Vector g = grad_log_posterior(spec, lambda);
        for (Index j = 0; j < 8; ++j) {
            const double h = 1e-6 * (1.0 + std::fabs(lambda[j]));
            Vector up = lambda, down = lambda;
            up[j] += h;
            down[j] -= h;
            const double fd =
                (log_posterior(spec, up) - log_posterior(spec, down)) / (2.0 * h);
            worst = std::max(worst, std::fabs(g[j] - fd) / std::max(1.0, std::fabs(g[j])));
        }
    }
    std::ostringstream detail;
    detail << "max_rel_error=" << worst << "<=1e-4 over 100 points";
    report(8, "analytic gradient vs finite differences", worst <= 1e-4, detail.str());
}

void criterion_9_determinism() {
    bool pass = true;
    std::ostringstream detail;
    {
        ExperimentConfig cfg = default_finite_ms_config();
        cfg.beta = 4.0;
        cfg.replications = 50;
        emit_results(run_replications(cfg), "acc_det_a.csv", OutputFormat::csv);
        emit_results(run_replications(cfg), "acc_det_b.csv", OutputFormat::csv);
        const bool same = read_file("acc_det_a.csv") == read_file("acc_det_b.csv");
        pass = pass && same;
        detail << "finite_ms csv identical=" << (same ? "yes" : "no");
        for (const char* p : {"acc_det_a.csv", "acc_det_b.csv"}) std::remove(p);
        std::remove(summary_path_for("acc_det_a.csv").c_str());
        std::remove(summary_path_for("acc_det_b.csv").c_str());
    }
    {
        ExperimentConfig cfg = default_sparse_soi_config();
        cfg.beta = 4.0;
        cfg.n = 40;
        cfg.M = 10;
        cfg.replications = 2;
        cfg.sampler.n_steps = 2000;
        cfg.sampler.burn_in = 500;
        cfg.sampler.n_chains = 2;
        emit_results(run_replications(cfg), "acc_det_c.csv", OutputFormat::csv);
        emit_results(run_replications(cfg), "acc_det_d.csv", OutputFormat::csv);
        const bool same = read_file("acc_det_c.csv") == read_file("acc_det_d.csv");
        pass = pass && same;
        detail << ", sparse_soi csv identical=" << (same ? "yes" : "no");
        for (const char* p : {"acc_det_c.csv", "acc_det_d.csv"}) std::remove(p);
        std::remove(summary_path_for("acc_det_c.csv").c_str());
        std::remove(summary_path_for("acc_det_d.csv").c_str());
    }
    report(9, "same config twice gives bit-identical csv", pass, detail.str());
}

void criterion_10_calculator_consistency() {
    Rng rng(2718);
    double worst_gap = 0.0;
    double worst_recompose = 0.0;
    for (int trial = 0; trial < 25; ++trial) {
        const Index n = 60, M = 15;
        Matrix x(n, M);
        for (Index j = 0; j < M; ++j) {
            for (Index i = 0; i < n; ++i) x(i, j) = rng.normal();
            x.col(j) *= std::sqrt(static_cast<double>(n)) / x.col(j).norm();
        }
        const EvaluatedDictionary dict{std::move(x)};
        CoefVector lam = Vector::Zero(M);
        const int m = 1 + static_cast<int>(rng.uniform() * 4.0);
        for (int k = 0; k < m; ++k) {
            lam[k] = (rng.uniform() < 0.5 ? -1.0 : 1.0) * rng.uniform(0.3, 2.0);
        }
        const Vector truth = predict(dict, lam);
        const double sigma2 = rng.uniform(0.4, 2.5);
        const double beta = 4.0 * sigma2;
        const BoundReport a = soi_bound_thm6path(lam, truth, dict, sigma2, beta);
        const BoundReport b = soip_bound_cor3(lam, 1.0, sigma2, beta, n);
        worst_gap = std::max(worst_gap, std::fabs(a.rhs - b.rhs));
        for (const BoundReport& r : {a, b}) {
            worst_recompose = std::max(
                worst_recompose,
                std::fabs(r.rhs - (r.approx_term + r.complexity_term + r.remainder)));
        }
    }
    const bool pass = worst_gap <= 1e-12 && worst_recompose == 0.0;
    std::ostringstream detail;
    detail << "max_rhs_gap=" << worst_gap << "<=1e-12, max_recompose_error=" << worst_recompose;
    report(10, "calculator self-consistency", pass, detail.str());
}

} // namespace

int main() {
    criterion_1_finite_ms();
    criterion_2_sparse_soi();
    criterion_3_mcmc_vs_quadrature();
    criterion_4_noise_identities();
    criterion_5_skorokhod();
    criterion_6_zeta_sampler();
    criterion_7_appendix();
    criterion_8_gradient();
    criterion_9_determinism();
    criterion_10_calculator_consistency();

    if (failures > 0) {
        std::printf("%d criterion(s) FAILED\n", failures);
        return 1;
    }
    std::printf("all 10 criteria passed\n");
    return 0;
}
