// scenario.hpp — JSON-configured runs of the lab modules with CSV output.
#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "qsde/errors.hpp"
#include "qsde/linalg.hpp"
#include "qsde/scalar_limit.hpp"
#include "qsde/toy_jump.hpp"

namespace qsde {

/// Configuration problem; the message names the offending field (exit status 2).
class ConfigError : public Error {
public:
    using Error::Error;
};

enum ExitCode : int { kExitPass = 0, kExitCheckFailed = 1, kExitUsage = 2, kExitResolution = 3 };

struct ScenarioConfig {
    std::string scenario;
    int dim = 1;
    std::map<std::string, ComplexMatrix> matrices;
    std::vector<ScalarSector> sectors;
    std::vector<double> alpha_schedule;
    double t_max = 1.0;
    int n_steps = 0;
    std::optional<LineGrid> grid;
    std::map<std::string, double> tolerances;
    std::uint64_t seed = 0;
    nlohmann::json params = nlohmann::json::object();

    /// Throws ConfigError naming the field on any validation failure.
    static ScenarioConfig from_json(const nlohmann::json& j);
    /// Reads the file, applies `key=value` dot-path overrides, then validates.
    static ScenarioConfig load(const std::filesystem::path& path,
                               const std::vector<std::string>& overrides = {});

    double tol(const std::string& name, double fallback) const;
    /// Matrix by name, or zero of size dim if absent.
    ComplexMatrix matrix_or_zero(const std::string& name) const;
};

/// Applies "a.b.c=value" to a JSON document; value is parsed as JSON when possible.
void apply_override(nlohmann::json& doc, const std::string& assignment);

struct CheckResult {
    std::string name;
    bool passed = false;
    double value = 0.0;
    double threshold = 0.0;
};

struct RunReport {
    std::string scenario;
    std::vector<CheckResult> checks;
    std::vector<std::filesystem::path> csv_paths;
    double wall_seconds = 0.0;

    bool passed() const;
    int exit_code() const { return passed() ? kExitPass : kExitCheckFailed; }
};

struct ScenarioInfo {
    std::string id;
    std::string description;
};

/// The six scenario ids in stable order.
const std::vector<ScenarioInfo>& list_scenarios();

/// Runs the scenario, writes its CSV(s) and report.json into out_dir (created if needed).
/// Independent sweep points run on up to `jobs` threads; output does not depend on it.
RunReport run_scenario(const ScenarioConfig& cfg, const std::filesystem::path& out_dir, int jobs = 1);
RunReport run_scenario(const std::filesystem::path& config_path, const std::filesystem::path& out_dir,
                       const std::vector<std::string>& overrides = {}, int jobs = 1);

}  // namespace qsde
