#include "tvct/run_config.hpp"

#include <cstdio>
#include <fstream>
#include <stdexcept>

#include "json.hpp"

namespace tvct {

RunConfig load_run_config(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("load_run_config: cannot open " + path);
    nlohmann::json j;
    try {
        is >> j;
    } catch (const nlohmann::json::exception& e) {
        throw std::runtime_error("load_run_config: " + std::string(e.what()));
    }
    if (!j.is_object()) throw std::runtime_error("load_run_config: expected a JSON object");

    RunConfig cfg;
    for (const auto& [key, val] : j.items()) {
        if (key == "solver")
            cfg.solver = val.get<std::string>();
        else if (key == "precond")
            cfg.precond = val.get<std::string>();
        else if (key == "variant")
            cfg.variant = val.get<std::string>();
        else if (key == "lambda")
            cfg.lambda = val.get<double>();
        else if (key == "sigma")
            cfg.sigma = val.get<double>();
        else if (key == "tau")
            cfg.tau = val.get<double>();
        else if (key == "cp_sigma")
            cfg.cp_sigma = val.get<double>();
        else if (key == "cp_tau")
            cfg.cp_tau = val.get<double>();
        else if (key == "mu")
            cfg.mu = val.get<double>();
        else if (key == "nu")
            cfg.nu = val.get<double>();
        else if (key == "admm_mu")
            cfg.admm_mu = val.get<double>();
        else if (key == "pcg_iters")
            cfg.pcg_iters = val.get<int>();
        else if (key == "iters")
            cfg.iters = val.get<int>();
        else if (key == "tol")
            cfg.tol = val.get<double>();
        else if (key == "seed")
            cfg.seed = val.get<std::uint64_t>();
        else if (key == "trace_every")
            cfg.trace_every = val.get<int>();
        else if (key == "rescale")
            cfg.rescale = val.get<bool>();
        else if (key == "warm_start_fbp")
            cfg.warm_start_fbp = val.get<bool>();
        else if (key == "c_fraction")
            cfg.c_fraction = val.get<double>();
        else if (key == "input")
            cfg.input = val.get<std::string>();
        else if (key == "output")
            cfg.output = val.get<std::string>();
        else if (key == "mask")
            cfg.mask_path = val.get<std::string>();
        else if (key == "thresholds")
            cfg.thresholds_path = val.get<std::string>();
        else if (key == "trace")
            cfg.trace_path = val.get<std::string>();
        else
            throw std::runtime_error("load_run_config: unknown key \"" + key + "\"");
    }
    return cfg;
}

std::vector<std::pair<std::string, std::string>> config_items(const RunConfig& cfg) {
    auto num = [](double v) {
        char buf[48];
        std::snprintf(buf, sizeof(buf), "%.17g", v);
        return std::string(buf);
    };
    return {
        {"solver", cfg.solver},
        {"precond", cfg.precond},
        {"variant", cfg.variant},
        {"lambda", num(cfg.lambda)},
        {"sigma", num(cfg.sigma)},
        {"tau", num(cfg.tau)},
        {"cp_sigma", num(cfg.cp_sigma)},
        {"cp_tau", num(cfg.cp_tau)},
        {"mu", num(cfg.mu)},
        {"nu", num(cfg.nu)},
        {"admm_mu", num(cfg.admm_mu)},
        {"pcg_iters", std::to_string(cfg.pcg_iters)},
        {"iters", std::to_string(cfg.iters)},
        {"tol", num(cfg.tol)},
        {"seed", std::to_string(cfg.seed)},
        {"trace_every", std::to_string(cfg.trace_every)},
        {"rescale", cfg.rescale ? "true" : "false"},
        {"warm_start_fbp", cfg.warm_start_fbp ? "true" : "false"},
        {"c_fraction", num(cfg.c_fraction)},
        {"input", cfg.input},
        {"output", cfg.output},
        {"mask", cfg.mask_path},
        {"thresholds", cfg.thresholds_path},
        {"trace", cfg.trace_path},
    };
}

}  // namespace tvct
