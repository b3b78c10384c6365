#pragma once

#include "ledsel/binning.hpp"
#include "ledsel/colorimetry.hpp"
#include "ledsel/config.hpp"
#include "ledsel/errors.hpp"
#include "ledsel/instrument.hpp"
#include "ledsel/line_sim.hpp"
#include "ledsel/plot.hpp"
#include "ledsel/report.hpp"
