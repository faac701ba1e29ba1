#pragma once

#include "ggmsim/circuits.hpp"
#include "ggmsim/error.hpp"
#include "ggmsim/gates.hpp"
#include "ggmsim/measurement.hpp"
#include "ggmsim/metrics.hpp"
#include "ggmsim/random.hpp"
#include "ggmsim/rmps.hpp"
#include "ggmsim/series.hpp"
#include "ggmsim/state.hpp"
