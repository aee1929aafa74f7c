#ifndef SOURCESEEK_IO_HPP
#define SOURCESEEK_IO_HPP

#include <iosfwd>
#include <string>

#include "sourceseek/field.hpp"
#include "sourceseek/geometry.hpp"

namespace seeker::io {

/// Every real value in an exported file uses fixed 9-decimal formatting,
/// locale-independent. Part of the byte-determinism contract.
std::string fmt(double v);

/// PathGraph debug export: `node,<id>,<x_mm>,<y_mm>` rows followed by
/// `edge,<u>,<v>,<length_mm>` rows.
void write_graph_csv(std::ostream& os, const geom::PathGraph& graph);

/// Waypoints as `x_mm,y_mm` rows under a header.
void write_path_csv(std::ostream& os, const geom::PlannedPath& path);

/// Field samples on a square lattice: `x_mm,y_mm,rssi_dbm` rows. The lattice
/// spans the arena inclusively at the requested resolution.
void write_field_csv(std::ostream& os, const field::SignalField& f,
                     double resolution_mm);

} // namespace seeker::io

#endif
