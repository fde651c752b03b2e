#pragma once

#include "deltaprime/abel.hpp"
#include "deltaprime/charge_solver.hpp"
#include "deltaprime/datum.hpp"
#include "deltaprime/diagnostics.hpp"
#include "deltaprime/free_propagator.hpp"
#include "deltaprime/gamma_profile.hpp"
#include "deltaprime/grids.hpp"
#include "deltaprime/identities.hpp"
#include "deltaprime/io.hpp"
#include "deltaprime/oscillatory_cells.hpp"
#include "deltaprime/pipeline.hpp"
#include "deltaprime/reconstruction.hpp"
#include "deltaprime/scenario.hpp"
#include "deltaprime/special_functions.hpp"
#include "deltaprime/types.hpp"
