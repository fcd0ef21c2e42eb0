#pragma once

#include <iosfwd>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "remx/init.hpp"
#include "remx/integrator.hpp"
#include "remx/physics.hpp"
#include "remx/state.hpp"

namespace remx {

enum class Mode { simulate, mms, sk_check, lemma1_check, energy_audit };

std::string mode_name(Mode mode);
/// Throws ConfigError naming `key` for an unknown name.
Mode parse_mode(const std::string& text, const std::string& key = "mode");

/// Every run input. The text form is a flat list of `key = value` lines with
/// dotted section keys; the full key list is in README.md.
struct Config {
  Mode mode = Mode::simulate;

  GridShape grid{1, {128, 1, 1}, {1.0, 1.0, 1.0}};

  double rho_bar = 1.0;
  double theta_bar = 1.0;
  Vec3 b_bar{0.5, 0.5, 0.0};

  double gas_constant = 1.0;
  double specific_heat = 1.5;
  double a = 1.0;
  double sigma_a = 1.0;
  double nu = 1.0;
  double cfl = 0.5;
  double t_end = 2.0;
  double output_every = 0.1;

  Reconstruction recon = Reconstruction::linear;
  TimeScheme scheme = TimeScheme::ssp_rk3;
  bool parallel = true;
  int snapshot_every = 10;  ///< snapshot at every k-th output; 0 disables

  PerturbationSpec perturb;

  // Mode-specific settings.
  int mms_levels = 4;          ///< grids n0, 2 n0, ...
  int mms_n0 = 32;
  double mms_t_end = 0.5;
  int sk_directions = 26;
  int lemma1_samples = 20000;
  std::vector<int> audit_cells{128, 256, 512};

  Model model() const;
  Equilibrium equilibrium() const;  ///< E_r from the compatibility condition
  StepperOptions stepper() const;

  /// Throws ConfigError naming the first invalid field.
  void validate() const;

  friend bool operator==(const Config&, const Config&) = default;
};

/// Parses `key = value` lines; '#' starts a comment. Unknown keys, repeated
/// keys and malformed values throw ConfigError naming the key. Omitted keys
/// keep their defaults. The result is validated.
Config parse_config(std::istream& is);
Config parse_config_string(const std::string& text);
Config load_config(const std::filesystem::path& path);

/// Writes every key in canonical order; parse(serialize(c)) == c.
std::string serialize_config(const Config& config);

/// Key/value view of a config (used for checkpoint metadata).
std::map<std::string, std::string> config_entries(const Config& config);
Config config_from_entries(const std::map<std::string, std::string>& entries);

/// All recognized keys in canonical order.
std::vector<std::string> config_keys();

}  // namespace remx
