#pragma once

#include <optional>
#include <string>
#include <vector>

#include "fluxquant/dynamics.hpp"
#include "fluxquant/sudden.hpp"

namespace fluxquant {

// Full run configuration; every field has a working default so the CLI runs
// without a config file. Loaded from a JSON document that rejects unknown
// keys and out-of-range values by name.
struct RunConfig {
    CircuitParams params = default_device_params;
    int basis_dim = 120;
    FluxAllocation allocation = FluxAllocation::Inductor;

    struct SpectrumBlock {
        double flux_min = 0.0;
        double flux_max = 1.0;
        int points = 201;
        int levels = 3;
        bool relative_to_ground = false;
    } spectrum;

    struct WavefunctionBlock {
        double flux = 0.5;
        std::vector<int> levels = {0, 1};
        double grid_min = -8.0;
        double grid_max = 8.0;
        double grid_step = 0.01;
    } wavefunction;

    struct SuddenBlock {
        double flux_a_min = 0.498;
        double flux_a_max = 0.503;
        double flux_a_step = 0.0005;
        double flux_b = default_flux_b;
        int levels_b = 12;
        double alpha = 0.05;
        bool band = false;  // add corrected columns for alpha in {0, 0.05, 0.1}
        ConfusionMatrix confusion = default_confusion();
    } sudden;

    struct DynamicsBlock {
        double flux_start = 0.5;
        double flux_end = default_flux_b;
        double rise_ns = 1.0;
        std::string shape = "linear";
        double t0_ns = 0.1;
        double dt_ns = 5e-4;
        double t_end_ns = 1.5;
        int stride = 200;  // output every stride-th step
        int levels = 12;
        bool verify_dt = true;
    } dynamics;

    struct FitBlock {
        int basis_dim_fit = 80;
        int max_iterations = 500;
    } fit;
};

// Parses the JSON document at `path`, applies `overrides` ("key.path=value"
// pairs from --set), validates, and returns the config. An empty path loads
// defaults (overrides still apply).
RunConfig load_config(const std::optional<std::string>& path,
                      const std::vector<std::string>& overrides);

// Resolves an output path against the FLUXQUANT_OUT directory override.
std::string resolve_output_path(const std::string& out);

void cmd_spectrum(const RunConfig& config, const std::string& out_path);
void cmd_wavefunction(const RunConfig& config, const std::string& out_path);
void cmd_sudden(const RunConfig& config, const std::string& out_path);
void cmd_dynamics(const RunConfig& config, const std::string& out_path);
void cmd_fit(const std::string& data_path, const RunConfig& config, const std::string& out_path);

// Entry point used by the fluxquant binary. Returns the process exit code:
// 0 success, 2 invalid arguments or config, 3 I/O failure, 4 numerical
// accuracy failure.
int run_cli(int argc, const char* const* argv);

}  // namespace fluxquant
