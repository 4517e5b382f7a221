#pragma once

#include <string>

namespace overdisp::cli {

/// Fixed-point text with `decimals` digits after the point. The shortest
/// decimal that round-trips the double is rounded half-to-even, so 0.125
/// and 2.675 both format the way they read (0.12, 2.68).
std::string format_fixed(double value, int decimals);

/// Scientific text d.ddd...e+XX with `digits` digits after the point,
/// rounded the same way.
std::string format_sci(double value, int digits);

}  // namespace overdisp::cli
