#include "vegnav/world/world_file.hpp"

#include <fstream>
#include <sstream>

#include "vegnav/errors.hpp"
#include "vegnav/util/config_file.hpp"

namespace vegnav::world {

namespace {

using util::ConfigFile;

HeightField parse_field(const ConfigFile& cf, const std::string& section) {
    HeightField f;
    if (!cf.has_section(section)) return f;
    f.base = cf.get_double(section, "base", 0.0);
    const auto ramp = cf.get_doubles(section, "ramp", {0.0, 0.0});
    if (ramp.size() != 2) throw ConfigError(cf.origin() + ": [" + section + "] ramp wants gx gy");
    f.ramp_x = ramp[0];
    f.ramp_y = ramp[1];
    for (const auto* e : cf.entries(section, "bump")) {
        if (e->values.size() != 4)
            throw ConfigError(cf.origin() + ": [" + section + "] bump wants cx cy amp sigma");
        Bump b;
        b.cx = std::stod(e->values[0]);
        b.cy = std::stod(e->values[1]);
        b.amp = std::stod(e->values[2]);
        b.sigma = std::stod(e->values[3]);
        if (b.sigma <= 0.0)
            throw ConfigError(cf.origin() + ": [" + section + "] bump sigma must be > 0");
        f.bumps.push_back(b);
    }
    for (const auto* e : cf.entries(section, "ripple")) {
        if (e->values.size() != 3)
            throw ConfigError(cf.origin() + ": [" + section + "] ripple wants amp kx ky");
        Ripple r;
        r.amp = std::stod(e->values[0]);
        r.kx = std::stod(e->values[1]);
        r.ky = std::stod(e->values[2]);
        f.ripples.push_back(r);
    }
    return f;
}

}  // namespace

WorldModel parse_world(const std::string& text, const std::string& origin) {
    const ConfigFile cf = ConfigFile::parse(text, origin);

    const auto b = cf.get_doubles("world", "bounds");
    if (b.size() != 4) throw ConfigError(origin + ": [world] bounds wants xmin ymin xmax ymax");
    Rect2 bounds;
    bounds.min = Vec2(b[0], b[1]);
    bounds.max = Vec2(b[2], b[3]);

    std::vector<Cylinder> obstacles;
    for (const auto* e : cf.entries("obstacles", "cylinder")) {
        if (e->values.size() != 4)
            throw ConfigError(origin + ": [obstacles] cylinder wants cx cy radius height");
        Cylinder c;
        c.center = Vec2(std::stod(e->values[0]), std::stod(e->values[1]));
        c.radius = std::stod(e->values[2]);
        c.height = std::stod(e->values[3]);
        obstacles.push_back(c);
    }

    SensorNoise noise;
    noise.cloud_sigma = cf.get_double("noise", "cloud_sigma", 0.0);
    noise.odom_pos_sigma = cf.get_double("noise", "odom_pos_sigma", 0.0);
    noise.odom_att_sigma = cf.get_double("noise", "odom_att_sigma", 0.0);
    noise.density = cf.get_double("noise", "density", 100.0);

    return WorldModel(bounds, parse_field(cf, "support"), parse_field(cf, "vegetation"),
                      std::move(obstacles), noise);
}

WorldModel load_world(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open world file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_world(buf.str(), path);
}

}  // namespace vegnav::world
