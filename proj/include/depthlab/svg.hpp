#pragma once

#include <string>
#include <vector>

#include "depthlab/core.hpp"

namespace depthlab {

/// Minimal 2D SVG emitter: sample clouds, hull polygons and body overlays.
class SvgScene {
  public:
    void add_points(const Matrix& pts, const std::string& color, double radius = 1.5);
    /// Closed polygon from ccw vertices.
    void add_polygon(const Matrix& verts, const std::string& stroke, const std::string& fill,
                     double fill_opacity = 0.15);
    std::string render(double width = 640.0) const;
    void write(const std::string& path, double width = 640.0) const;

  private:
    struct PointSet {
        Matrix pts;
        std::string color;
        double radius;
    };
    struct Polygon {
        Matrix verts;
        std::string stroke, fill;
        double opacity;
    };
    std::vector<PointSet> points_;
    std::vector<Polygon> polys_;
};

}  // namespace depthlab
