#pragma once

#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "archk/kernel.hpp"
#include "archk/space.hpp"

namespace archk {

// ---- plain file access ----
std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

// ---- space definition files ----
// JSON object: {"dimensions":[{"id","type":"real"|"categorical",
// "lower"/"upper" or "values"}...], "conditions":[{"target","governor",
// "allowed":[...]}...]}. Unknown keys are rejected.
SpaceDescription parse_space_json(const std::string& text);
std::string space_to_json(const SpaceDescription& description);
SpacePtr read_space_file(const std::string& path);

// ---- config files ----
// JSON map id -> value (number for real dims, string for categorical).
Config parse_config_json(const std::string& text);
std::vector<Config> parse_config_list_json(const std::string& text);
std::string config_to_json(const ParamSpace& space, const Config& config);
Config read_config_file(const std::string& path);
std::vector<Config> read_config_list_file(const std::string& path);

// ---- kernel settings files ----
// JSON object: {"combination":"sum"|"product", "default":{...},
// "dimensions":{id:{...}}}. Entry fields: gamma, rho, kernel {"type":
// "eq"|"rq", sigma, lambda, alpha}. Omitted fields fall back to the
// "default" entry, then to gamma=1, rho=1, eq(sigma=1, lambda=1).
KernelSpec parse_kernel_spec_json(SpacePtr space, const std::string& text);
std::string kernel_spec_to_json(const KernelSpec& spec);
KernelSpec read_kernel_spec_file(SpacePtr space, const std::string& path);

// ---- tabular config/dataset files ----
// CSV whose header names every dimension id once, optionally followed by a
// final `y` column. Empty cell = unassigned. Lines starting with '#' are
// comments. Rows are validated against the space; errors carry row numbers.
struct TableData {
  std::vector<Config> configs;
  std::optional<Eigen::VectorXd> targets;
};
TableData parse_dataset_csv(const ParamSpace& space, const std::string& text);
std::string dataset_to_csv(const ParamSpace& space, const std::vector<Config>& configs,
                           const Eigen::VectorXd* targets = nullptr,
                           const std::string& comment = "");
TableData read_dataset_file(const ParamSpace& space, const std::string& path);

// ---- matrix files ----
// CSV of rows of numbers, 17 significant digits, '#' comment lines skipped.
std::string matrix_to_csv(const Eigen::MatrixXd& matrix, const std::string& comment = "");
Eigen::MatrixXd parse_matrix_csv(const std::string& text);
Eigen::MatrixXd read_matrix_file(const std::string& path);

}  // namespace archk
