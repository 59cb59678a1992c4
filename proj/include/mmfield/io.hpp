#pragma once

#include <cstddef>
#include <string>

#include "mmfield/adm.hpp"
#include "mmfield/field.hpp"
#include "mmfield/lipschitz.hpp"
#include "mmfield/transport.hpp"

namespace mmf {

/// Malformed or inconsistent JSON input. Carries 1-based line/column when the
/// failure came from the JSON parser itself (0 otherwise).
struct ParseError : std::runtime_error {
  ParseError(const std::string& msg, std::size_t line_ = 0, std::size_t col_ = 0)
      : std::runtime_error(msg), line(line_), col(col_) {}
  std::size_t line = 0;
  std::size_t col = 0;
};

/// Parses the field JSON format:
///   { "metric": {"kind":"explicit","d":[[...]]}
///             | {"kind":"euclidean","points":[[...]]}
///             | {"kind":"sup","points":[[...]]},
///     "measure": [...] | "uniform",
///     "target": {"kind":"euclidean","dim":k} | {"kind":"sup","dim":k}
///             | {"kind":"finite","d":[[...]]} | {"kind":"hamming","len":l},
///     "values": [...] }
/// A metric object carrying both "d" and "points" is rejected as ambiguous.
MMField parse_field(const std::string& text);

/// Fixed key order, metric always emitted explicitly, doubles exact, so that
/// parse(serialize(f)) reproduces identical values.
std::string serialize_field(const MMField& f);

/// { "p": [[...]] }
Coupling parse_coupling(const std::string& text);
std::string serialize_coupling(const Coupling& c);

/// { "f": [...], "b": <value>, "mass_mode": "zero-mass" | "uniform-reweight" }
/// The value is parsed against the given target space.
struct ParsedCandidate {
  OnePointCandidate candidate;
  MassMode mode = MassMode::zero_mass;
};
ParsedCandidate parse_candidate(const std::string& text, const TargetSpace& target);

/// Cache format for empirical ADM distributions.
std::string serialize_empirical_adm(const EmpiricalAdm& e);
EmpiricalAdm parse_empirical_adm(const std::string& text);

}  // namespace mmf
