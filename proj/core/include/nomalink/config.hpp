#pragma once

#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "nomalink/optimizer.hpp"
#include "nomalink/sim.hpp"

namespace nomalink {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// "a:b:step" (inclusive endpoints) or a single dB value.
std::vector<double> parse_ebn0_spec(const std::string& spec);

// JSON with exactly the documented fields; unknown keys are errors.
SimConfig parse_sim_config(const std::string& json_text);
SimConfig load_sim_config(const std::string& path);
OptimizerConfig parse_optimizer_config(const std::string& json_text);
OptimizerConfig load_optimizer_config(const std::string& path);

// CSV emitters; all numeric fields use %.10g so identical runs serialize
// byte-identically.
void write_ber_csv(std::ostream& os, const BerResult& result);
void write_trajectory_csv(std::ostream& os, const ExitTrajectory& trajectory);
void write_curve_csv(std::ostream& os, const ExitCurve& curve);
void write_optimizer_log_csv(std::ostream& os, const OptimizerResult& result);

// Emits a code as a JSON object reloadable through a sim config's "code" slot.
void write_code_json(std::ostream& os, const std::string& name, const CodeParams& params,
                     const SystemDims& dims, double sigma_n);

}  // namespace nomalink
