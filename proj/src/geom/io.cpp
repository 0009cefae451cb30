#include "vegnav/geom/io.hpp"

#include <fstream>
#include <sstream>

#include "vegnav/errors.hpp"
#include "vegnav/geom/attitude.hpp"

namespace vegnav::geom {

namespace {

// Strips '#' comments and surrounding whitespace; empty result means skip.
std::string clean_line(const std::string& raw) {
    std::string line = raw;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const auto first = line.find_first_not_of(" \t\r\n");
    if (first == std::string::npos) return {};
    const auto last = line.find_last_not_of(" \t\r\n");
    return line.substr(first, last - first + 1);
}

}  // namespace

std::vector<Vec3> load_cloud(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("load_cloud: cannot open " + path);
    std::vector<Vec3> points;
    std::string raw;
    int lineno = 0;
    while (std::getline(in, raw)) {
        ++lineno;
        const std::string line = clean_line(raw);
        if (line.empty()) continue;
        std::istringstream ss(line);
        Vec3 p;
        if (!(ss >> p.x() >> p.y() >> p.z()))
            throw IoError("load_cloud: bad record at " + path + ":" + std::to_string(lineno));
        points.push_back(p);
    }
    return points;
}

void save_cloud(const std::string& path, const std::vector<Vec3>& points) {
    std::ofstream out(path);
    if (!out) throw IoError("save_cloud: cannot open " + path);
    out.precision(9);
    for (const auto& p : points) out << p.x() << ' ' << p.y() << ' ' << p.z() << '\n';
    if (!out) throw IoError("save_cloud: write failed for " + path);
}

TrajectoryHistory load_trajectory(const std::string& path, std::size_t capacity,
                                  double min_stride, double sigma_n_pro) {
    std::ifstream in(path);
    if (!in) throw IoError("load_trajectory: cannot open " + path);
    TrajectoryHistory history(capacity, min_stride, sigma_n_pro);
    std::string raw;
    int lineno = 0;
    while (std::getline(in, raw)) {
        ++lineno;
        const std::string line = clean_line(raw);
        if (line.empty()) continue;
        std::istringstream ss(line);
        double t;
        Vec3 p;
        Mat3 R;
        if (!(ss >> t >> p.x() >> p.y() >> p.z()))
            throw IoError("load_trajectory: bad record at " + path + ":" + std::to_string(lineno));
        for (int r = 0; r < 3; ++r)
            for (int c = 0; c < 3; ++c)
                if (!(ss >> R(r, c)))
                    throw IoError("load_trajectory: bad rotation at " + path + ":" +
                                  std::to_string(lineno));
        if (!is_rotation(R))
            throw IoError("load_trajectory: non-orthonormal rotation at " + path + ":" +
                          std::to_string(lineno));
        history.append(p, R, t);
    }
    return history;
}

void save_trajectory(const std::string& path, const TrajectoryHistory& history) {
    std::ofstream out(path);
    if (!out) throw IoError("save_trajectory: cannot open " + path);
    out.precision(12);
    for (std::size_t i = 0; i < history.size(); ++i) {
        const auto& s = history[i];
        out << s.time << ' ' << s.position.x() << ' ' << s.position.y() << ' '
            << s.position.z();
        for (int r = 0; r < 3; ++r)
            for (int c = 0; c < 3; ++c) out << ' ' << s.rotation(r, c);
        out << '\n';
    }
    if (!out) throw IoError("save_trajectory: write failed for " + path);
}

}  // namespace vegnav::geom
