#pragma once

#include "ggmsim/harness/config.hpp"
#include "ggmsim/harness/experiment.hpp"
#include "ggmsim/harness/records.hpp"
