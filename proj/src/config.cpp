#include "ltcf/config.hpp"

#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

namespace ltcf {

std::string VariantName(Variant v) {
  switch (v) {
    case Variant::kFull: return "full";
    case Variant::kD0S1: return "d0s1";
    case Variant::kD0SM: return "d0sm";
    case Variant::kDstS1: return "dsts1";
    case Variant::kDstSM: return "dstsm";
    case Variant::kShortTermOnly: return "st_only";
  }
  return "full";
}

Variant VariantFromName(const std::string &name) {
  if (name == "full") return Variant::kFull;
  if (name == "d0s1") return Variant::kD0S1;
  if (name == "d0sm") return Variant::kD0SM;
  if (name == "dsts1") return Variant::kDstS1;
  if (name == "dstsm") return Variant::kDstSM;
  if (name == "st_only") return Variant::kShortTermOnly;
  throw std::invalid_argument("unknown tracker variant: " + name);
}

namespace {

std::string Trim(const std::string &s) {
  size_t a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  size_t b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

template <typename T>
std::vector<T> ParseList(const std::string &value) {
  std::vector<T> out;
  std::stringstream ss(value);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = Trim(item);
    if (item.empty()) continue;
    if constexpr (std::is_same_v<T, int>) {
      out.push_back(std::stoi(item));
    } else {
      out.push_back(std::stod(item));
    }
  }
  if (out.empty()) throw std::invalid_argument("empty list");
  return out;
}

bool ParseBool(const std::string &value) {
  if (value == "1" || value == "true" || value == "yes" || value == "on") return true;
  if (value == "0" || value == "false" || value == "no" || value == "off") return false;
  throw std::invalid_argument("not a boolean: " + value);
}

template <typename T>
std::string JoinList(const std::vector<T> &values) {
  std::ostringstream out;
  for (size_t i = 0; i < values.size(); ++i) {
    if (i) out << ",";
    out << values[i];
  }
  return out.str();
}

}  // namespace

void ApplyConfigLine(RunParams &p, const std::string &raw_line, int line_number) {
  std::string line = raw_line;
  size_t hash = line.find('#');
  if (hash != std::string::npos) line = line.substr(0, hash);
  line = Trim(line);
  if (line.empty()) return;

  size_t eq = line.find('=');
  if (eq == std::string::npos) {
    throw std::runtime_error("config line " + std::to_string(line_number) +
                             ": expected key = value");
  }
  std::string key = Trim(line.substr(0, eq));
  std::string value = Trim(line.substr(eq + 1));

  try {
    if (key == "eta") p.eta = std::stod(value);
    else if (key == "lambda") p.lambda = std::stod(value);
    else if (key == "tau_q") p.tau_q = std::stod(value);
    else if (key == "n_q") p.n_q = std::stoi(value);
    else if (key == "alpha_s") p.alpha_s = std::stod(value);
    else if (key == "detector_periods") p.detector_periods = ParseList<int>(value);
    else if (key == "detector_scales") p.detector_scales = ParseList<double>(value);
    else if (key == "variant") p.variant = VariantFromName(value);
    else if (key == "cell_size") p.cell_size = std::stoi(value);
    else if (key == "padding") p.padding = std::stod(value);
    else if (key == "max_template_side") p.max_template_side = std::stoi(value);
    else if (key == "sigma_factor") p.sigma_factor = std::stod(value);
    else if (key == "psr_radius") p.psr_radius = std::stoi(value);
    else if (key == "use_hog") p.use_hog = ParseBool(value);
    else if (key == "use_colornames") p.use_colornames = ParseBool(value);
    else if (key == "use_gray") p.use_gray = ParseBool(value);
    else if (key == "colornames_table") p.colornames_table = value;
    else if (key == "admm_iterations") p.admm_iterations = std::stoi(value);
    else if (key == "mu_init") p.mu_init = std::stod(value);
    else if (key == "mu_scale") p.mu_scale = std::stod(value);
    else if (key == "mu_max") p.mu_max = std::stod(value);
    else if (key == "num_scales") p.num_scales = std::stoi(value);
    else if (key == "scale_step") p.scale_step = std::stod(value);
    else if (key == "scale_min") p.scale_min = std::stod(value);
    else if (key == "scale_max") p.scale_max = std::stod(value);
    else {
      throw std::runtime_error("config line " + std::to_string(line_number) +
                               ": unknown key '" + key + "'");
    }
  } catch (const std::runtime_error &) {
    throw;
  } catch (const std::exception &e) {
    throw std::runtime_error("config line " + std::to_string(line_number) + ": bad value for '" +
                             key + "': " + e.what());
  }
}

RunParams LoadRunParams(const std::filesystem::path &path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("config file not readable: " + path.string());
  RunParams params;
  std::string line;
  int line_number = 0;
  while (std::getline(in, line)) {
    ApplyConfigLine(params, line, ++line_number);
  }
  return params;
}

std::string SerializeRunParams(const RunParams &p) {
  std::ostringstream out;
  out.precision(17);
  out << "eta = " << p.eta << "\n";
  out << "lambda = " << p.lambda << "\n";
  out << "tau_q = " << p.tau_q << "\n";
  out << "n_q = " << p.n_q << "\n";
  out << "alpha_s = " << p.alpha_s << "\n";
  out << "detector_periods = " << JoinList(p.detector_periods) << "\n";
  out << "detector_scales = " << JoinList(p.detector_scales) << "\n";
  out << "variant = " << VariantName(p.variant) << "\n";
  out << "cell_size = " << p.cell_size << "\n";
  out << "padding = " << p.padding << "\n";
  out << "max_template_side = " << p.max_template_side << "\n";
  out << "sigma_factor = " << p.sigma_factor << "\n";
  out << "psr_radius = " << p.psr_radius << "\n";
  out << "use_hog = " << (p.use_hog ? "true" : "false") << "\n";
  out << "use_colornames = " << (p.use_colornames ? "true" : "false") << "\n";
  out << "use_gray = " << (p.use_gray ? "true" : "false") << "\n";
  out << "colornames_table = " << p.colornames_table << "\n";
  out << "admm_iterations = " << p.admm_iterations << "\n";
  out << "mu_init = " << p.mu_init << "\n";
  out << "mu_scale = " << p.mu_scale << "\n";
  out << "mu_max = " << p.mu_max << "\n";
  out << "num_scales = " << p.num_scales << "\n";
  out << "scale_step = " << p.scale_step << "\n";
  out << "scale_min = " << p.scale_min << "\n";
  out << "scale_max = " << p.scale_max << "\n";
  return out.str();
}

void SaveRunParams(const RunParams &params, const std::filesystem::path &path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write config: " + path.string());
  out << SerializeRunParams(params);
}

}  // namespace ltcf
