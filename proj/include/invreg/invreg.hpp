#pragma once

// Umbrella header for the whole library.

#include "errors.hpp"
#include "filters.hpp"
#include "random.hpp"
#include "sequence_model.hpp"
#include "risk.hpp"
#include "param_select.hpp"
#include "problems.hpp"
#include "montecarlo.hpp"
#include "rate_inference.hpp"
#include "table_io.hpp"
#include "filter_checks.hpp"
#include "config.hpp"
#include "cli.hpp"
