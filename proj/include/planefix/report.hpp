#pragma once

#include <string>

#include <json.hpp>

#include "planefix/fixpoint.hpp"
#include "planefix/tristate.hpp"

namespace planefix {

using Json = nlohmann::ordered_json;

/// Finite numbers pass through; non-finite ones become null.
Json num(double v);
Json to_json(Point p);
Json to_json(const Box& b);
Json to_json(const TriState& t);
Json to_json(const FixedPointCertificate& c);

/// One `path = value` line per leaf in document order, numbers printed with 17 significant digits.
std::string to_flat_text(const Json& report);
/// Inverse of to_flat_text.
Json parse_flat_text(const std::string& text);

}  // namespace planefix
