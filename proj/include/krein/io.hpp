#pragma once

#include <string>

#include "krein/extrapolate.hpp"
#include "krein/measure.hpp"
#include "krein/twospectra.hpp"

namespace krein {

// File helpers; failures surface as InvalidInput naming the path.
std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

// Mass description:
//   {"length": L, "segments": [{"x0","x1","poly"}...],
//    "point_masses": [{"x","m"}...],
//    "singular": [{"x0","x1","mass","depth","ratio"}...]}
// "poly" holds 1..4 coefficients, constant term first.  Unknown keys are
// rejected by name; range checks are the distribution's own invariants.
MassDistribution parse_mass_json(const std::string& text);

// Spectra:
//   {"L": L, "mu": [...], "lambda": [...],
//    "tail": {"class": "none|quadratic|quartic", "b", "beta"},
//    "truncated": bool}
// "tail" defaults to none, "truncated" to true for a modeled tail and false
// otherwise.  A "residuals" array is tolerated and ignored so written
// spectrum files can be read back.
TwoSpectra parse_spectra_json(const std::string& text);

// Distinguish the two document shapes by their top-level keys.
enum class InputKind { mass, spectra };
InputKind sniff_input_kind(const std::string& text);

// All numeric output goes through one formatter: %.17g, so values
// round-trip and files are byte-deterministic.
std::string format_double(double v);

std::string to_json(const TwoSpectra& S);
std::string to_json(const AsymptoticReport& r);

// CSV uses '.' for decimals, ',' as separator, and always has a header.
std::string to_csv(const TwoSpectra& S);    // index,mu,lambda
std::string to_csv(const AsymptoticReport& r); // parameter,value

} // namespace krein
