#include "cli/run_config.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <stdexcept>

namespace curvint::cli {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

double to_double(std::string_view v) {
  double out = 0.0;
  auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size()) {
    throw std::invalid_argument("expected a number, got '" + std::string(v) + "'");
  }
  return out;
}

std::int64_t to_int(std::string_view v) {
  std::int64_t out = 0;
  auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size()) {
    throw std::invalid_argument("expected an integer, got '" + std::string(v) + "'");
  }
  return out;
}

bool to_bool(std::string_view v) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw std::invalid_argument("expected true or false, got '" + std::string(v) + "'");
}

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

void assign(RunConfig& cfg, std::string_view key, std::string_view value) {
  if (key == "kind") cfg.kind = parse_kind(value);
  else if (key == "kappa") cfg.kappa = to_double(value);
  else if (key == "g") cfg.g = to_double(value);
  else if (key == "k_a") cfg.k_a = to_double(value);
  else if (key == "k_b") cfg.k_b = to_double(value);
  else if (key == "m_num") cfg.m_num = to_int(value);
  else if (key == "m_den") cfg.m_den = to_int(value);
  else if (key == "r") cfg.initial.r = to_double(value);
  else if (key == "phi") cfg.initial.phi = to_double(value);
  else if (key == "p_r") cfg.initial.p_r = to_double(value);
  else if (key == "p_phi") cfg.initial.p_phi = to_double(value);
  else if (key == "t_end") cfg.t_end = to_double(value);
  else if (key == "rel_tol") cfg.integrator.rel_tol = to_double(value);
  else if (key == "abs_tol") cfg.integrator.abs_tol = to_double(value);
  else if (key == "max_step") cfg.integrator.max_step = to_double(value);
  else if (key == "singularity_margin") cfg.integrator.singularity_margin = to_double(value);
  else if (key == "out") cfg.out = std::string(value);
  else if (key == "verify_grid") cfg.verify_grid = to_bool(value);
  else if (key == "negative_control") cfg.negative_control = to_bool(value);
  else if (key == "random_states") cfg.random_states = static_cast<int>(to_int(value));
  else throw std::invalid_argument("unknown key '" + std::string(key) + "'");
}

}  // namespace

SystemKind parse_kind(std::string_view text) {
  if (text == "free" || text == "free_geodesic") return SystemKind::FreeGeodesic;
  if (text == "kepler") return SystemKind::Kepler;
  if (text == "vc") return SystemKind::Vc;
  if (text == "pw") return SystemKind::PW;
  if (text == "generic") {
    throw std::invalid_argument("kind 'generic' needs an angular function and cannot be configured "
                                "from a file");
  }
  throw std::invalid_argument("unknown kind '" + std::string(text) + "'");
}

SystemSpec RunConfig::system() const {
  try {
    const Curvature k(kappa);
    switch (kind) {
      case SystemKind::FreeGeodesic: return SystemSpec::free_geodesic(k);
      case SystemKind::Kepler: return SystemSpec::kepler(k, g);
      case SystemKind::Vc:
        if (Rational(m_num, m_den) != Rational(1, 1)) {
          throw std::invalid_argument("kind vc requires m = 1");
        }
        return SystemSpec::vc(k, g, k_a, k_b);
      case SystemKind::PW: return SystemSpec::pw(k, g, k_a, k_b, Rational(m_num, m_den));
      case SystemKind::GenericF: break;
    }
    throw std::invalid_argument("kind 'generic' cannot be configured from a file");
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    throw ConfigError("<config>", 0, e.what());
  }
}

bool operator==(const RunConfig& a, const RunConfig& b) {
  const auto& ia = a.integrator;
  const auto& ib = b.integrator;
  return a.kind == b.kind && a.kappa == b.kappa && a.g == b.g && a.k_a == b.k_a &&
         a.k_b == b.k_b && a.m_num == b.m_num && a.m_den == b.m_den && a.initial == b.initial &&
         a.t_end == b.t_end && ia.rel_tol == ib.rel_tol && ia.abs_tol == ib.abs_tol &&
         ia.max_step == ib.max_step && ia.singularity_margin == ib.singularity_margin &&
         a.out == b.out && a.verify_grid == b.verify_grid &&
         a.negative_control == b.negative_control && a.random_states == b.random_states;
}

RunConfig parse_config(std::istream& in, const std::string& source) {
  RunConfig cfg;
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string_view line(raw);
    if (const auto hash = line.find('#'); hash != std::string_view::npos) {
      line = line.substr(0, hash);
    }
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError(source, line_no, "expected 'key = value'");
    }
    const auto key = trim(line.substr(0, eq));
    const auto value = trim(line.substr(eq + 1));
    if (key.empty()) throw ConfigError(source, line_no, "missing key");
    try {
      assign(cfg, key, value);
    } catch (const std::invalid_argument& e) {
      throw ConfigError(source, line_no, e.what());
    }
  }
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path, 0, "cannot open file");
  return parse_config(in, path);
}

void write_config(std::ostream& os, const RunConfig& cfg) {
  os << "# curvint run configuration\n";
  os << "kind = " << to_string(cfg.kind) << '\n';
  os << "kappa = " << format_double(cfg.kappa) << '\n';
  os << "g = " << format_double(cfg.g) << '\n';
  os << "k_a = " << format_double(cfg.k_a) << '\n';
  os << "k_b = " << format_double(cfg.k_b) << '\n';
  os << "m_num = " << cfg.m_num << '\n';
  os << "m_den = " << cfg.m_den << '\n';
  os << "r = " << format_double(cfg.initial.r) << '\n';
  os << "phi = " << format_double(cfg.initial.phi) << '\n';
  os << "p_r = " << format_double(cfg.initial.p_r) << '\n';
  os << "p_phi = " << format_double(cfg.initial.p_phi) << '\n';
  os << "t_end = " << format_double(cfg.t_end) << '\n';
  os << "rel_tol = " << format_double(cfg.integrator.rel_tol) << '\n';
  os << "abs_tol = " << format_double(cfg.integrator.abs_tol) << '\n';
  os << "max_step = " << format_double(cfg.integrator.max_step) << '\n';
  os << "singularity_margin = " << format_double(cfg.integrator.singularity_margin) << '\n';
  if (!cfg.out.empty()) os << "out = " << cfg.out << '\n';
  os << "verify_grid = " << (cfg.verify_grid ? "true" : "false") << '\n';
  os << "negative_control = " << (cfg.negative_control ? "true" : "false") << '\n';
  os << "random_states = " << cfg.random_states << '\n';
}

}  // namespace curvint::cli
