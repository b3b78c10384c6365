#pragma once

#include "ledsel/cmf.hpp"
#include "ledsel/color_types.hpp"
#include "ledsel/macadam.hpp"
#include "ledsel/spectrum.hpp"
