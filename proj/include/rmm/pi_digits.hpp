#pragma once

#include <string_view>

namespace rmm {

/// First 10000 decimal digits of pi after the decimal point ("14159...").
std::string_view pi_decimal_digits();

}  // namespace rmm
