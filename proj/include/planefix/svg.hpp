#pragma once

#include <string>

#include "planefix/run.hpp"

namespace planefix {

/// SVG 1.1 document with layers for the domain, shaded face, image curves, arcs with
/// direction arrows, certified boxes and fixed points. Coordinates carry four decimals.
std::string render_svg(const RenderData& data);

}  // namespace planefix
