#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "towlab/elliptic.hpp"
#include "towlab/game.hpp"
#include "towlab/lattice.hpp"
#include "towlab/parabolic.hpp"

namespace towlab {

// round-trip exact serialization for 64-bit floats
std::string format_double(double v);

// header x1,...,xn,class,value; interior + strip nodes in row-major order
void write_field_csv(const LatticeField& field, std::ostream& os);
void write_field_csv_file(const LatticeField& field, const std::string& path);

// loads values back onto a lattice built with the same parameters
LatticeField read_field_csv_file(const std::shared_ptr<const Lattice>& lattice,
                                 const std::string& path);

// header x1,...,xn,t,class,value; slices outer, nodes inner
void write_spacetime_csv(const SpaceTimeField& field, std::ostream& os);
void write_spacetime_csv_file(const SpaceTimeField& field, const std::string& path);

std::string solve_report_json(const SolveReport& rep);
std::string value_estimate_json(const ValueEstimate& est);

void write_text_file(const std::string& path, const std::string& content);

}  // namespace towlab
