#pragma once

#include "symhardy/errors.hpp"
#include "symhardy/symcore.hpp"
#include "symhardy/random.hpp"
#include "symhardy/permanent.hpp"
#include "symhardy/majorana.hpp"
#include "symhardy/bell.hpp"
#include "symhardy/optimize.hpp"
#include "symhardy/hardy.hpp"
#include "symhardy/io.hpp"

namespace symhardy {
inline constexpr const char* kVersion = "0.1.0";
}
