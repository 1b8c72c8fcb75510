#pragma once

// JSON (de)serialization for the wire formats:
//   TorusSpec      {d, gamma, alpha, beta, c0, lambda_re, lambda_im}
//   FourierField   [{m: [..], re, im}, ...]
//   SpacetimeSpectrum {tau: [..], delta, entries: [{m, values_re, values_im}]}
// Readers validate strictly: unknown keys are rejected by name.

#include <string>

#include "json.hpp"
#include "zaklab/dyadic.hpp"
#include "zaklab/torus.hpp"

namespace zaklab {

nlohmann::json torus_to_json(const TorusSpec& spec);
TorusSpec torus_from_json(const nlohmann::json& j);

nlohmann::json field_to_json(const FourierField& f);
FourierField field_from_json(const nlohmann::json& j, const DualLattice& lat);

nlohmann::json spectrum_to_json(const SpacetimeSpectrum& s);

// throw std::invalid_argument naming the offending key on schema violations
void validate_torus_json(const nlohmann::json& j);
void validate_field_json(const nlohmann::json& j);
void validate_spectrum_json(const nlohmann::json& j);

// RFC-4180 field quoting
std::string csv_quote(const std::string& s);

// JSON cannot carry NaN/Inf: absent values are null
nlohmann::json finite_or_null(double v);

}  // namespace zaklab
