// Compares the OpenMP replication loop against the serial reference on the
// same configuration and checks that the outputs are bit-identical.

#include <chrono>
#include <cstring>
#include <iostream>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "ewagg/harness.hpp"

namespace {

double time_run(ewagg::RunResult (*fn)(const ewagg::ExperimentConfig&),
                const ewagg::ExperimentConfig& cfg, ewagg::RunResult& out) {
    const auto start = std::chrono::steady_clock::now();
    out = fn(cfg);
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

bool identical(const ewagg::RunResult& a, const ewagg::RunResult& b) {
    if (a.rows.size() != b.rows.size()) return false;
    for (std::size_t r = 0; r < a.rows.size(); ++r) {
        if (std::memcmp(&a.rows[r].risk, &b.rows[r].risk, sizeof(double)) != 0) return false;
        if (a.rows[r].seed != b.rows[r].seed) return false;
    }
    return std::memcmp(&a.estimate.mean_risk, &b.estimate.mean_risk, sizeof(double)) == 0;
}

} // namespace

int main(int argc, char** argv) {
    bool sparse = false;
    long replications = -1;
    for (int i = 1; i < argc; ++i) {
        if (std::strcmp(argv[i], "--sparse") == 0) sparse = true;
        if (std::strcmp(argv[i], "--replications") == 0 && i + 1 < argc) {
            replications = std::atol(argv[++i]);
        }
    }

    ewagg::ExperimentConfig cfg =
        sparse ? ewagg::default_sparse_soi_config() : ewagg::default_finite_ms_config();
    cfg.beta = 4.0;
    if (replications > 0) cfg.replications = replications;
    if (sparse && replications < 0) cfg.replications = 8;

#ifdef _OPENMP
    std::cout << "openmp threads: " << omp_get_max_threads() << '\n';
#else
    std::cout << "openmp: not enabled\n";
#endif
    std::cout << "scenario=" << ewagg::to_string(cfg.scenario)
              << " replications=" << cfg.replications << '\n';

    ewagg::RunResult serial_result, parallel_result;
    const double t_serial = time_run(ewagg::run_replications_serial, cfg, serial_result);
    const double t_parallel = time_run(ewagg::run_replications, cfg, parallel_result);

    std::cout << "serial:   " << t_serial << " s\n";
    std::cout << "parallel: " << t_parallel << " s  (speedup "
              << (t_parallel > 0.0 ? t_serial / t_parallel : 0.0) << "x)\n";

    if (!identical(serial_result, parallel_result)) {
        std::cerr << "FAIL: serial and parallel outputs differ\n";
        return 1;
    }
    std::cout << "outputs bit-identical: yes\n";
    std::cout << "mean_risk=" << serial_result.estimate.mean_risk
              << " bound_rhs=" << serial_result.estimate.bound_rhs << '\n';
    return 0;
}
