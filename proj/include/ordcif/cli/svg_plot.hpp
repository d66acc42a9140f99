#pragma once

#include <string>

#include "ordcif/cif_set.hpp"

namespace ordcif::cli {

// Static SVG with one step-curve <polyline> per cause, axes in data units and
// a legend. The x range runs from 0 to `upper`.
std::string render_cifs_svg(const CifSet& cifs, double upper, const std::string& title);

}  // namespace ordcif::cli
