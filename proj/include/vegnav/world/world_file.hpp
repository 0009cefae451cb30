#pragma once

#include <string>

#include "vegnav/world/world.hpp"

namespace vegnav::world {

// World spec files are sectioned key = value text:
//
//   [world]
//   bounds = xmin ymin xmax ymax
//   [support]             # optional; flat zero surface when absent
//   base = 0.0
//   ramp = gx gy
//   bump = cx cy amp sigma      # repeatable
//   ripple = amp kx ky          # repeatable
//   [vegetation]          # optional; zero vegetation when absent
//   ... same keys as [support]
//   [obstacles]           # optional
//   cylinder = cx cy radius height   # repeatable
//   [noise]               # optional; zeros / density 100 when absent
//   cloud_sigma = 0.02
//   odom_pos_sigma = 0.01
//   odom_att_sigma = 0.005
//   density = 1200
WorldModel load_world(const std::string& path);
WorldModel parse_world(const std::string& text, const std::string& origin = "<string>");

}  // namespace vegnav::world
