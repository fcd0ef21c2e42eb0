#include "remx/config.hpp"

#include <charconv>
#include <fstream>
#include <functional>
#include <iomanip>
#include <istream>
#include <set>
#include <sstream>

#include "remx/errors.hpp"

namespace remx {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::string fmt_double(double v) {
  std::ostringstream os;
  os << std::setprecision(17) << v;
  return os.str();
}

double parse_double(const std::string& key, const std::string& text) {
  double v = 0.0;
  const char* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc() || ptr != end || !std::isfinite(v)) {
    throw ConfigError(key + ": expected a finite number, got '" + text + "'");
  }
  return v;
}

int parse_int(const std::string& key, const std::string& text) {
  int v = 0;
  const char* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc() || ptr != end) {
    throw ConfigError(key + ": expected an integer, got '" + text + "'");
  }
  return v;
}

std::vector<int> parse_int_list(const std::string& key,
                                const std::string& text) {
  std::vector<int> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(parse_int(key, trim(item)));
  if (out.empty()) throw ConfigError(key + ": empty list");
  return out;
}

std::string fmt_int_list(const std::vector<int>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) s += ',';
    s += std::to_string(v[i]);
  }
  return s;
}

bool parse_bool(const std::string& key, const std::string& text) {
  if (text == "true") return true;
  if (text == "false") return false;
  throw ConfigError(key + ": expected true or false, got '" + text + "'");
}

std::string recon_name(Reconstruction r) {
  switch (r) {
    case Reconstruction::first_order: return "first_order";
    case Reconstruction::linear: return "linear";
    case Reconstruction::minmod: return "minmod";
  }
  return "linear";
}

Reconstruction parse_recon(const std::string& key, const std::string& text) {
  if (text == "first_order") return Reconstruction::first_order;
  if (text == "linear") return Reconstruction::linear;
  if (text == "minmod") return Reconstruction::minmod;
  throw ConfigError(key + ": unknown reconstruction '" + text + "'");
}

std::string scheme_name(TimeScheme s) {
  return s == TimeScheme::midpoint ? "midpoint" : "ssp_rk3";
}

TimeScheme parse_scheme(const std::string& key, const std::string& text) {
  if (text == "midpoint") return TimeScheme::midpoint;
  if (text == "ssp_rk3") return TimeScheme::ssp_rk3;
  throw ConfigError(key + ": unknown time scheme '" + text + "'");
}

struct Entry {
  std::string key;
  std::function<std::string(const Config&)> get;
  std::function<void(Config&, const std::string&, const std::string&)> set;
};

Entry real(std::string key, double Config::*field) {
  return {key, [field](const Config& c) { return fmt_double(c.*field); },
          [field](Config& c, const std::string& k, const std::string& v) {
            c.*field = parse_double(k, v);
          }};
}

Entry integer(std::string key, int Config::*field) {
  return {key, [field](const Config& c) { return std::to_string(c.*field); },
          [field](Config& c, const std::string& k, const std::string& v) {
            c.*field = parse_int(k, v);
          }};
}

const std::vector<Entry>& entries() {
  static const std::vector<Entry> table = [] {
    std::vector<Entry> t;
    t.push_back({"mode", [](const Config& c) { return mode_name(c.mode); },
                 [](Config& c, const std::string& k, const std::string& v) {
                   c.mode = parse_mode(v, k);
                 }});
    t.push_back({"grid.dim",
                 [](const Config& c) { return std::to_string(c.grid.dim); },
                 [](Config& c, const std::string& k, const std::string& v) {
                   c.grid.dim = parse_int(k, v);
                 }});
    const char* axes[3] = {"x", "y", "z"};
    for (int a = 0; a < 3; ++a) {
      t.push_back({std::string("grid.n") + axes[a],
                   [a](const Config& c) { return std::to_string(c.grid.n[a]); },
                   [a](Config& c, const std::string& k, const std::string& v) {
                     c.grid.n[a] = parse_int(k, v);
                   }});
    }
    for (int a = 0; a < 3; ++a) {
      t.push_back({std::string("grid.l") + axes[a],
                   [a](const Config& c) { return fmt_double(c.grid.length[a]); },
                   [a](Config& c, const std::string& k, const std::string& v) {
                     c.grid.length[a] = parse_double(k, v);
                   }});
    }
    t.push_back(real("equilibrium.rho", &Config::rho_bar));
    t.push_back(real("equilibrium.theta", &Config::theta_bar));
    for (int a = 0; a < 3; ++a) {
      t.push_back({"equilibrium.b" + std::to_string(a + 1),
                   [a](const Config& c) { return fmt_double(c.b_bar[a]); },
                   [a](Config& c, const std::string& k, const std::string& v) {
                     c.b_bar[a] = parse_double(k, v);
                   }});
    }
    t.push_back(real("params.gas_constant", &Config::gas_constant));
    t.push_back(real("params.specific_heat", &Config::specific_heat));
    t.push_back(real("params.a", &Config::a));
    t.push_back(real("params.sigma_a", &Config::sigma_a));
    t.push_back(real("params.nu", &Config::nu));
    t.push_back(real("params.cfl", &Config::cfl));
    t.push_back(real("params.t_end", &Config::t_end));
    t.push_back(real("params.output_every", &Config::output_every));
    t.push_back({"numerics.reconstruction",
                 [](const Config& c) { return recon_name(c.recon); },
                 [](Config& c, const std::string& k, const std::string& v) {
                   c.recon = parse_recon(k, v);
                 }});
    t.push_back({"numerics.time_scheme",
                 [](const Config& c) { return scheme_name(c.scheme); },
                 [](Config& c, const std::string& k, const std::string& v) {
                   c.scheme = parse_scheme(k, v);
                 }});
    t.push_back({"numerics.parallel",
                 [](const Config& c) { return std::string(c.parallel ? "true" : "false"); },
                 [](Config& c, const std::string& k, const std::string& v) {
                   c.parallel = parse_bool(k, v);
                 }});
    t.push_back(integer("output.snapshot_every", &Config::snapshot_every));
    for (int f = 0; f < kPertCount; ++f) {
      const std::string base = "perturb." + std::string(perturbed_field_name(f));
      t.push_back({base + ".amplitude",
                   [f](const Config& c) { return fmt_double(c.perturb.fields[f].amplitude); },
                   [f](Config& c, const std::string& k, const std::string& v) {
                     c.perturb.fields[f].amplitude = parse_double(k, v);
                   }});
      t.push_back({base + ".mode",
                   [f](const Config& c) {
                     const auto& m = c.perturb.fields[f].mode;
                     return fmt_int_list({m[0], m[1], m[2]});
                   },
                   [f](Config& c, const std::string& k, const std::string& v) {
                     const auto list = parse_int_list(k, v);
                     if (list.size() != 3) {
                       throw ConfigError(k + ": expected three mode numbers");
                     }
                     c.perturb.fields[f].mode = {list[0], list[1], list[2]};
                   }});
      t.push_back({base + ".phase",
                   [f](const Config& c) { return fmt_double(c.perturb.fields[f].phase); },
                   [f](Config& c, const std::string& k, const std::string& v) {
                     c.perturb.fields[f].phase = parse_double(k, v);
                   }});
    }
    t.push_back(integer("mms.levels", &Config::mms_levels));
    t.push_back(integer("mms.n0", &Config::mms_n0));
    t.push_back(real("mms.t_end", &Config::mms_t_end));
    t.push_back(integer("sk.directions", &Config::sk_directions));
    t.push_back(integer("lemma1.samples", &Config::lemma1_samples));
    t.push_back({"audit.cells",
                 [](const Config& c) { return fmt_int_list(c.audit_cells); },
                 [](Config& c, const std::string& k, const std::string& v) {
                   c.audit_cells = parse_int_list(k, v);
                 }});
    return t;
  }();
  return table;
}

const Entry* find_entry(const std::string& key) {
  for (const Entry& e : entries()) {
    if (e.key == key) return &e;
  }
  return nullptr;
}

void require(bool ok, const std::string& key, const std::string& what) {
  if (!ok) throw ConfigError(key + ": " + what);
}

}  // namespace

std::string mode_name(Mode mode) {
  switch (mode) {
    case Mode::simulate: return "simulate";
    case Mode::mms: return "mms";
    case Mode::sk_check: return "sk-check";
    case Mode::lemma1_check: return "lemma1-check";
    case Mode::energy_audit: return "energy-audit";
  }
  return "simulate";
}

Mode parse_mode(const std::string& text, const std::string& key) {
  for (Mode m : {Mode::simulate, Mode::mms, Mode::sk_check, Mode::lemma1_check,
                 Mode::energy_audit}) {
    if (mode_name(m) == text) return m;
  }
  throw ConfigError(key + ": unknown mode '" + text + "'");
}

Model Config::model() const {
  return make_ideal_model(gas_constant, specific_heat, a, sigma_a, nu);
}

Equilibrium Config::equilibrium() const {
  return make_equilibrium(rho_bar, theta_bar, b_bar, RadiationClosure{a, sigma_a});
}

StepperOptions Config::stepper() const {
  StepperOptions opt;
  opt.recon = recon;
  opt.scheme = scheme;
  opt.exec = parallel ? Exec::parallel : Exec::serial;
  return opt;
}

void Config::validate() const {
  require(grid.dim >= 1 && grid.dim <= 3, "grid.dim", "must be 1, 2 or 3");
  const char* axes[3] = {"x", "y", "z"};
  for (int a = 0; a < 3; ++a) {
    const std::string nk = std::string("grid.n") + axes[a];
    const std::string lk = std::string("grid.l") + axes[a];
    if (a < grid.dim) {
      require(grid.n[a] >= 3, nk, "active axes need at least 3 cells");
    } else {
      require(grid.n[a] == 1, nk, "inactive axes must have 1 cell");
    }
    require(grid.length[a] > 0.0, lk, "must be positive");
  }
  require(rho_bar > 0.0, "equilibrium.rho", "must be positive");
  require(theta_bar > 0.0, "equilibrium.theta", "must be positive");
  require(gas_constant > 0.0, "params.gas_constant", "must be positive");
  require(specific_heat > 0.0, "params.specific_heat", "must be positive");
  require(a > 0.0, "params.a", "must be positive");
  require(sigma_a >= 0.0, "params.sigma_a", "must be non-negative");
  require(nu >= 0.0, "params.nu", "must be non-negative");
  require(cfl > 0.0 && cfl <= 1.0, "params.cfl", "must lie in (0, 1]");
  require(t_end > 0.0, "params.t_end", "must be positive");
  require(output_every > 0.0, "params.output_every", "must be positive");
  require(snapshot_every >= 0, "output.snapshot_every", "must be non-negative");
  for (int f = 0; f < kPertCount; ++f) {
    const ModeSpec& m = perturb.fields[f];
    const std::string base = "perturb." + std::string(perturbed_field_name(f));
    if (m.amplitude == 0.0) continue;
    for (int ax = 0; ax < 3; ++ax) {
      if (ax >= grid.dim) {
        require(m.mode[ax] == 0, base + ".mode", "nonzero mode on inactive axis");
      } else {
        require(2 * std::abs(m.mode[ax]) < grid.n[ax], base + ".mode",
                "mode number not resolved by the grid");
      }
    }
  }
  // The admissible set needs |drho| < rho/2 and |dtheta|, |dT_r| < theta/2;
  // these are necessary conditions, init_fields checks the actual fields.
  require(std::abs(perturb.fields[kPertRho].amplitude) < 0.5 * rho_bar,
          "perturb.rho.amplitude", "leaves (rho/2, 2 rho)");
  require(std::abs(perturb.fields[kPertTheta].amplitude) < 0.5 * theta_bar,
          "perturb.theta.amplitude", "leaves (theta/2, 2 theta)");
  require(mms_levels >= 2, "mms.levels", "need at least 2 levels");
  require(mms_n0 >= 8, "mms.n0", "need at least 8 cells");
  require(mms_t_end > 0.0, "mms.t_end", "must be positive");
  require(sk_directions >= 1, "sk.directions", "must be positive");
  require(lemma1_samples >= 1000, "lemma1.samples", "must be at least 1000");
  require(!audit_cells.empty(), "audit.cells", "must not be empty");
  for (int n : audit_cells) require(n >= 8, "audit.cells", "need at least 8 cells");
}

std::vector<std::string> config_keys() {
  std::vector<std::string> keys;
  for (const Entry& e : entries()) keys.push_back(e.key);
  return keys;
}

std::map<std::string, std::string> config_entries(const Config& config) {
  std::map<std::string, std::string> out;
  for (const Entry& e : entries()) out[e.key] = e.get(config);
  return out;
}

Config config_from_entries(const std::map<std::string, std::string>& values) {
  Config c;
  for (const auto& [key, value] : values) {
    const Entry* e = find_entry(key);
    if (!e) throw ConfigError(key + ": unknown key");
    e->set(c, key, value);
  }
  c.validate();
  return c;
}

Config parse_config(std::istream& is) {
  std::map<std::string, std::string> values;
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("line " + std::to_string(lineno) +
                        ": expected 'key = value'");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (!find_entry(key)) throw ConfigError(key + ": unknown key");
    if (!values.emplace(key, value).second) {
      throw ConfigError(key + ": repeated key");
    }
  }
  return config_from_entries(values);
}

Config parse_config_string(const std::string& text) {
  std::istringstream is(text);
  return parse_config(is);
}

Config load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open '" + path.string() + "'");
  return parse_config(in);
}

std::string serialize_config(const Config& config) {
  std::string out;
  std::string section;
  for (const Entry& e : entries()) {
    const std::string head = e.key.substr(0, e.key.find('.'));
    if (head != section && !section.empty()) out += '\n';
    section = head;
    out += e.key + " = " + e.get(config) + '\n';
  }
  return out;
}

}  // namespace remx
