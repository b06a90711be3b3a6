#pragma once

#include <string>

namespace specshape {

/// 17 significant digits, '.' decimal separator, locale independent.
std::string fmt_double(double x);

}  // namespace specshape
