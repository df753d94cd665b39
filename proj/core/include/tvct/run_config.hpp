#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace tvct {

/// Reconstruction run configuration. A JSON config file and command-line
/// flags populate the same fields; flags take precedence. Unknown keys in
/// the file are rejected.
struct RunConfig {
    std::string solver = "pdrq1";
    std::string precond = "invnorm";
    std::string variant = "soft";
    double lambda = 0.3;
    double sigma = 1.0;
    double tau = 1.0;       // gradient scaling
    double cp_sigma = 0.0;  // Chambolle-Pock steps; 0 = choose automatically
    double cp_tau = 0.0;
    double mu = 1.0;
    double nu = 0.0;
    double admm_mu = 1.0;
    int pcg_iters = 2;
    int iters = 500;
    double tol = 1e-6;
    std::uint64_t seed = 1;
    int trace_every = 1;
    bool rescale = true;
    bool warm_start_fbp = false;
    double c_fraction = 0.8;
    std::string input;
    std::string output;
    std::string mask_path;
    std::string thresholds_path;
    std::string trace_path;
};

RunConfig load_run_config(const std::string& path);

/// Key/value view of the effective configuration, echoed into trace headers.
std::vector<std::pair<std::string, std::string>> config_items(const RunConfig& cfg);

}  // namespace tvct
