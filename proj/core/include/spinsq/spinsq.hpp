#pragma once

#include "spinsq/entanglement.hpp"
#include "spinsq/error.hpp"
#include "spinsq/operators.hpp"
#include "spinsq/reductions.hpp"
#include "spinsq/report.hpp"
#include "spinsq/squeezing.hpp"
#include "spinsq/state_file.hpp"
#include "spinsq/states.hpp"
