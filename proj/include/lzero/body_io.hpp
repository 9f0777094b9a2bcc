#pragma once

#include <string>

#include <json.hpp>

#include "lzero/bodies.hpp"

namespace lzero {

/// Builds a body from a JSON body spec, for example
///   {"dim": 3, "kind": "lq", "q": 4}
///   {"kind": "mult_sum", "left": {...}, "right": {...}}
/// A top-level array of {"xi", "a", "b", "weight"} records loads as a
/// LogBlend of directional ellipsoids (the ellipsoid-product format).
/// Errors are InputError with the JSON pointer of the offending field.
StarBody parse_body(const nlohmann::json& spec);

/// Parses JSON text, then parse_body.
StarBody parse_body_text(const std::string& text);

/// Inverse of parse_body. Doubles are written with round-trip precision.
/// Throws InputError for bodies of revolution with a custom profile.
nlohmann::json serialize_body(const StarBody& body);

/// Revolution body with profile sqrt(1 - t^2), i.e. the Euclidean ball.
StarBody sphere_revolution_body(int n);

}  // namespace lzero
