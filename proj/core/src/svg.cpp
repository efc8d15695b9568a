#include "formplan/svg.hpp"

#include <array>
#include <cmath>
#include <iomanip>
#include <sstream>

#include "formplan/errors.hpp"

namespace formplan {

namespace {

constexpr std::array<const char*, 8> kPalette{"#2ca02c", "#ff7f0e", "#9467bd", "#8c564b",
                                              "#e377c2", "#17becf", "#bcbd22", "#7f7f7f"};

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

class Canvas {
 public:
  Canvas(const Rect& world, double width_px)
      : world_(world), scale_(width_px / world.width()), height_px_(world.height() * scale_) {}

  double x(Point p) const { return (p.x - world_.xmin) * scale_; }
  // SVG grows downwards; the map's y axis points up.
  double y(Point p) const { return (world_.ymax - p.y) * scale_; }
  double scale() const { return scale_; }
  double height_px() const { return height_px_; }

 private:
  Rect world_;
  double scale_;
  double height_px_;
};

}  // namespace

std::string render_svg(const PolygonMap& map, const Roadmap& roadmap, std::span<const Path> paths,
                       const SvgOptions& options) {
  for (std::size_t i = 0; i < paths.size(); ++i) {
    for (VertexId v : paths[i]) {
      if (!roadmap.contains(v)) {
        throw ValidationError("path " + std::to_string(i) + " references unknown vertex " +
                                  std::to_string(v),
                              static_cast<int>(i));
      }
    }
  }
  const Occupancy occupancy = Occupancy::of(roadmap, paths);
  const Canvas cv(map.border, options.width_px);
  const double unit = std::max(1.0, options.width_px / 400.0);

  std::ostringstream os;
  os << std::fixed << std::setprecision(2);
  os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << options.width_px << "\" height=\""
     << cv.height_px() << "\" viewBox=\"0 0 " << options.width_px << ' ' << cv.height_px()
     << "\">\n";
  os << "<title>" << escape(map.name) << "</title>\n";
  os << "<rect x=\"0\" y=\"0\" width=\"" << options.width_px << "\" height=\"" << cv.height_px()
     << "\" fill=\"white\" stroke=\"black\" stroke-width=\"" << 2 * unit << "\"/>\n";

  os << "<g id=\"obstacles\" fill=\"#555555\">\n";
  for (const Polygon& poly : map.obstacles) {
    os << "<polygon points=\"";
    for (const Point& p : poly) os << cv.x(p) << ',' << cv.y(p) << ' ';
    os << "\"/>\n";
  }
  os << "</g>\n";

  if (options.draw_roadmap) {
    os << "<g id=\"roadmap\" stroke=\"#9ecae1\" stroke-width=\"" << unit << "\">\n";
    for (const Edge& e : roadmap.edges()) {
      const Point a = roadmap.vertex(e.u).pos;
      const Point b = roadmap.vertex(e.v).pos;
      os << "<line x1=\"" << cv.x(a) << "\" y1=\"" << cv.y(a) << "\" x2=\"" << cv.x(b)
         << "\" y2=\"" << cv.y(b) << "\"/>\n";
    }
    os << "</g>\n";
  }

  os << "<g id=\"paths\" fill=\"none\" stroke-width=\"" << 2 * unit << "\">\n";
  for (std::size_t i = 0; i < paths.size(); ++i) {
    os << "<polyline stroke=\"" << kPalette[i % kPalette.size()] << "\" points=\"";
    for (VertexId v : paths[i]) {
      const Point p = roadmap.vertex(v).pos;
      os << cv.x(p) << ',' << cv.y(p) << ' ';
    }
    os << "\"/>\n";
  }
  os << "</g>\n";

  if (options.edge_labels) {
    os << "<g id=\"labels\" font-family=\"sans-serif\" font-size=\"" << 6 * unit << "\">\n";
    for (const Edge& e : roadmap.edges()) {
      const int n = occupancy.count(e.id);
      if (n == 0) continue;
      Point from = roadmap.vertex(e.u).pos;
      Point to = roadmap.vertex(e.v).pos;
      if (occupancy.forward(e.id) == 0) std::swap(from, to);
      const Point mid = midpoint(from, to);
      const double len = distance(from, to);
      const double mx = cv.x(mid);
      const double my = cv.y(mid);
      if (len > 0.0) {
        // Screen-space direction; y is flipped.
        const double dx = (to.x - from.x) / len;
        const double dy = -(to.y - from.y) / len;
        const double s = 4 * unit;
        os << "<polygon fill=\"black\" points=\"" << mx + dx * s << ',' << my + dy * s << ' '
           << mx - dx * s - dy * s * 0.6 << ',' << my - dy * s + dx * s * 0.6 << ' '
           << mx - dx * s + dy * s * 0.6 << ',' << my - dy * s - dx * s * 0.6 << "\"/>\n";
      }
      os << "<text x=\"" << mx + 5 * unit << "\" y=\"" << my - 3 * unit << "\">" << n
         << "</text>\n";
    }
    os << "</g>\n";
  }

  if (!paths.empty() && !paths.front().empty()) {
    const Point s = roadmap.vertex(paths.front().front()).pos;
    const Point g = roadmap.vertex(paths.front().back()).pos;
    os << "<circle id=\"start\" cx=\"" << cv.x(s) << "\" cy=\"" << cv.y(s) << "\" r=\""
       << 5 * unit << "\" fill=\"blue\"/>\n";
    os << "<circle id=\"goal\" cx=\"" << cv.x(g) << "\" cy=\"" << cv.y(g) << "\" r=\"" << 5 * unit
       << "\" fill=\"red\"/>\n";
  }
  os << "</svg>\n";
  return os.str();
}

}  // namespace formplan
