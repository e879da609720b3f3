#pragma once

// Flat "key = value" run configuration. Lines starting with '#' and blank
// lines are ignored; a '#' after a value starts a trailing comment.
//
//   kind = pw            # free | kepler | vc | pw
//   kappa = 1
//   g = 1
//   k_a = 0.8
//   k_b = 0.3
//   m_num = 2
//   m_den = 1
//   r = 1.2
//   ...

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>

#include "curvint/dynamics.hpp"
#include "curvint/errors.hpp"
#include "curvint/systems.hpp"

namespace curvint::cli {

class ConfigError : public Error {
 public:
  ConfigError(std::string source, int line, const std::string& message)
      : Error(source + ":" + std::to_string(line) + ": " + message),
        source_(std::move(source)),
        line_(line) {}

  const std::string& source() const noexcept { return source_; }
  // 1-based; 0 when the problem is not tied to one line.
  int line() const noexcept { return line_; }

 private:
  std::string source_;
  int line_;
};

struct RunConfig {
  SystemKind kind = SystemKind::PW;
  double kappa = 0.0;
  double g = 1.0;
  double k_a = 0.8;
  double k_b = 0.3;
  std::int64_t m_num = 1;
  std::int64_t m_den = 1;

  // phi = 1 is off every barrier sin(m phi) = 0 for rational m.
  PhaseState initial{1.0, 1.0, 0.0, 1.0};
  double t_end = 100.0;
  IntegratorConfig integrator{};
  std::string out;

  // verify: sweep kappa in {-1, 0, 1} and m in {1, 2, 1/2, 3/2} (pw only).
  bool verify_grid = false;
  // verify: add checks on deliberately corrupted invariants.
  bool negative_control = false;
  int random_states = 100;

  // Throws ConfigError (line 0) when the fields do not describe a system.
  SystemSpec system() const;

  friend bool operator==(const RunConfig& a, const RunConfig& b);
};

SystemKind parse_kind(std::string_view text);

RunConfig parse_config(std::istream& in, const std::string& source = "<config>");
RunConfig load_config(const std::string& path);

// Writes every key; parse_config of the output reproduces `cfg` exactly.
void write_config(std::ostream& os, const RunConfig& cfg);

}  // namespace curvint::cli
