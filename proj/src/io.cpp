#include "sourceseek/io.hpp"

#include <cstdio>
#include <ostream>

namespace seeker::io {

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.9f", v);
    return buf;
}

void write_graph_csv(std::ostream& os, const geom::PathGraph& graph) {
    os << "type,a,b,c\n";
    for (std::size_t i = 0; i < graph.nodes.size(); ++i)
        os << "node," << i << ',' << fmt(graph.nodes[i].x()) << ','
           << fmt(graph.nodes[i].y()) << '\n';
    for (const auto& e : graph.edges)
        os << "edge," << e.u << ',' << e.v << ',' << fmt(e.length) << '\n';
}

void write_path_csv(std::ostream& os, const geom::PlannedPath& path) {
    os << "x_mm,y_mm\n";
    for (const Vec2& p : path.waypoints)
        os << fmt(p.x()) << ',' << fmt(p.y()) << '\n';
}

void write_field_csv(std::ostream& os, const field::SignalField& f,
                     double resolution_mm) {
    if (resolution_mm <= 0.0) throw InvalidConfig("resolution_mm must be > 0");
    os << "x_mm,y_mm,rssi_dbm\n";
    const double eps = 1e-9 * resolution_mm;
    for (double y = f.arena.lo.y(); y <= f.arena.hi.y() + eps; y += resolution_mm) {
        const double yc = std::min(y, f.arena.hi.y());
        for (double x = f.arena.lo.x(); x <= f.arena.hi.x() + eps; x += resolution_mm) {
            const double xc = std::min(x, f.arena.hi.x());
            os << fmt(xc) << ',' << fmt(yc) << ','
               << fmt(field::sample(f, Vec2(xc, yc))) << '\n';
        }
    }
}

} // namespace seeker::io
