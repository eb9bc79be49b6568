#pragma once

#include <string>

namespace tinet {

/// Round-trip decimal form of a double with 17 significant digits.
std::string fmt17(double x);

}  // namespace tinet
