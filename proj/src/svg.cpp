#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "depthlab/svg.hpp"

namespace depthlab {

void SvgScene::add_points(const Matrix& pts, const std::string& color, double radius) {
    if (pts.cols != 2) throw ConfigError("SvgScene: points must be planar");
    points_.push_back({pts, color, radius});
}

void SvgScene::add_polygon(const Matrix& verts, const std::string& stroke, const std::string& fill,
                           double fill_opacity) {
    if (verts.cols != 2) throw ConfigError("SvgScene: polygon must be planar");
    polys_.push_back({verts, stroke, fill, fill_opacity});
}

std::string SvgScene::render(double width) const {
    double lo_x = 0.0, hi_x = 1.0, lo_y = 0.0, hi_y = 1.0;
    bool first = true;
    auto grow = [&](const Matrix& m) {
        for (std::size_t i = 0; i < m.rows; ++i) {
            double x = m.at(i, 0), y = m.at(i, 1);
            if (first) {
                lo_x = hi_x = x;
                lo_y = hi_y = y;
                first = false;
            } else {
                lo_x = std::min(lo_x, x);
                hi_x = std::max(hi_x, x);
                lo_y = std::min(lo_y, y);
                hi_y = std::max(hi_y, y);
            }
        }
    };
    for (const auto& p : points_) grow(p.pts);
    for (const auto& p : polys_) grow(p.verts);
    double span = std::max({hi_x - lo_x, hi_y - lo_y, 1e-9});
    double pad = 0.05 * span;
    lo_x -= pad;
    lo_y -= pad;
    span += 2.0 * pad;
    double scale = width / span;

    auto tx = [&](double x) { return (x - lo_x) * scale; };
    auto ty = [&](double y) { return width - (y - lo_y) * scale; };  // flip y

    std::ostringstream out;
    char buf[128];
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << (int)width << "\" height=\""
        << (int)width << "\" viewBox=\"0 0 " << (int)width << ' ' << (int)width << "\">\n";
    for (const auto& p : polys_) {
        out << "  <polygon points=\"";
        for (std::size_t i = 0; i < p.verts.rows; ++i) {
            std::snprintf(buf, sizeof buf, "%.3f,%.3f ", tx(p.verts.at(i, 0)),
                          ty(p.verts.at(i, 1)));
            out << buf;
        }
        std::snprintf(buf, sizeof buf,
                      "\" stroke=\"%s\" fill=\"%s\" fill-opacity=\"%.3f\" stroke-width=\"1.5\"/>\n",
                      p.stroke.c_str(), p.fill.empty() ? "none" : p.fill.c_str(), p.opacity);
        out << buf;
    }
    for (const auto& p : points_) {
        for (std::size_t i = 0; i < p.pts.rows; ++i) {
            std::snprintf(buf, sizeof buf,
                          "  <circle cx=\"%.3f\" cy=\"%.3f\" r=\"%.2f\" fill=\"%s\"/>\n",
                          tx(p.pts.at(i, 0)), ty(p.pts.at(i, 1)), p.radius, p.color.c_str());
            out << buf;
        }
    }
    out << "</svg>\n";
    return out.str();
}

void SvgScene::write(const std::string& path, double width) const {
    std::ofstream f(path);
    if (!f) throw ConfigError("cannot write " + path);
    f << render(width);
}

}  // namespace depthlab
