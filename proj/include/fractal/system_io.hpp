#pragma once

#include "fractal/expr.hpp"
#include "fractal/fde.hpp"

#include <string>
#include <string_view>

namespace fractal {

/// A system read from JSON.
///
/// First order: {"order": 1, "g": "-y", "y0": 1, "equilibrium": 0}
/// (g may use y or h for the state).
///
/// Second order: {"order": 2, "u": ..., "v": ..., "f": ..., "h": ..., "q": ...,
/// "H": ..., "dh": ..., "dv": ..., "r1": ..., "r2": ..., "constants": {...},
/// "y0": 1, "z0": 0, "equilibrium": 0}. u, v, dv, r1, r2 are functions of
/// tau; f of (y, z); h, H, dh of y; q of (tau, y, z). Only h is required:
/// u and v default to 1, f to 0, q to 0.
struct SystemDefinition {
    int order = 2;
    Expression g;
    FdeSystem system;
    double y0 = 1.0;
    double z0 = 0.0;
    double equilibrium = 0.0;

    ScalarField field() const;
};

/// Parses a JSON document. Throws ParameterError (ParseError for bad
/// expressions) on malformed input.
SystemDefinition parse_system(std::string_view json_text);

/// `source` is inline JSON when it starts with '{', otherwise a file path.
SystemDefinition load_system(const std::string& source);

}  // namespace fractal
