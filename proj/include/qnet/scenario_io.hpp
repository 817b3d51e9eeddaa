#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "qnet/network.hpp"

namespace qnet {

/// Parse failure with position information.
class ParseError : public std::runtime_error {
 public:
  ParseError(int line, std::string field, std::string reason)
      : std::runtime_error("line " + std::to_string(line) + ": field '" + field +
                           "': " + reason),
        line_(line),
        field_(std::move(field)),
        reason_(std::move(reason)) {}
  int line() const { return line_; }
  const std::string& field() const { return field_; }
  const std::string& reason() const { return reason_; }

 private:
  int line_;
  std::string field_;
  std::string reason_;
};

struct SourceSpec {
  enum class Kind { Werner, Bloch, Matrix };
  Kind kind = Kind::Werner;
  double v = 0.0;                 // werner
  Vec3 bloch_u{}, bloch_v{};      // bloch
  Tensor3 correlation;            // bloch
  ComplexMatrix matrix;           // matrix
  int line = 0;                   // section header line, for diagnostics
};

struct PartySpec {
  enum class Role { Edge, Central };
  Role role = Role::Edge;
  // edge: either (plane, t) or explicit directions
  std::optional<Plane> plane;
  double t = 0.0;
  std::optional<Vec3> dir0, dir1;
  double eta = 1.0;
  std::optional<double> eta1;  // second setting's sharpness, defaults to eta
  // central
  enum class BasisKind { Bell, Ghz };
  BasisKind basis = BasisKind::Bell;
  int line = 0;
};

/// Parsed scenario document (see README for the grammar): top-level
/// `topology` / `n` and optional `name` / `reference_value` keys, followed
/// by [[source]] and [[party]] sections.
struct ScenarioFile {
  Topology topology = Topology::Linear;
  int n = 0;
  std::string name;
  std::optional<double> reference_value;
  std::vector<SourceSpec> sources;
  std::vector<PartySpec> parties;

  /// Materialize (throws std::invalid_argument on semantic problems,
  /// e.g. an invalid density matrix or a wrong party layout).
  NetworkScenario build() const;
};

ScenarioFile parse_scenario(const std::string& text);
ScenarioFile load_scenario(const std::string& path);  // throws on I/O failure too

/// Emit a document that parses back to the same scenario (states as
/// Bloch data at 17 significant digits; the rebuilt density matrices
/// agree to reconstruction rounding, well under 1e-12).
std::string serialize_scenario(const NetworkScenario& scenario, const std::string& name = "",
                               std::optional<double> reference_value = std::nullopt);

}  // namespace qnet
