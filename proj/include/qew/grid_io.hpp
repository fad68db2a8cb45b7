#pragma once

#include "qew/core_state.hpp"

#include <iosfwd>
#include <string>

namespace qew {

// CSV layout:
//   # axis1_kind=<kind>       (also axis1_min, axis1_max, axis2_kind, axis2_min, axis2_max)
//   # <key>=<value>           one line per metadata entry, in order
//   axis1,axis2,re,im,prob
//   <rows, axis1 slow, reals printed with 17 significant digits>
void write_grid_csv(const JointAmplitudeGrid& grid, std::ostream& out);
JointAmplitudeGrid read_grid_csv(std::istream& in);

// Same fields as the CSV: axis descriptors, "metadata" object (ordered), and
// "cells" as an array of {axis1, axis2, re, im, prob}.
void write_grid_json(const JointAmplitudeGrid& grid, std::ostream& out);
JointAmplitudeGrid read_grid_json(std::istream& in);

// "%.17g" formatting shared by every emitter.
std::string format_real(double v);

} // namespace qew
