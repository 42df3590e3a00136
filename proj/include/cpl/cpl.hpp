#pragma once

#include "cpl/constants.hpp"
#include "cpl/errors.hpp"
#include "cpl/quadrature.hpp"
#include "cpl/exact_rnt.hpp"
#include "cpl/sphere_grid.hpp"
#include "cpl/surface.hpp"
#include "cpl/imcf.hpp"
#include "cpl/graph_data.hpp"
#include "cpl/inequalities.hpp"
#include "cpl/corpus.hpp"
#include "cpl/io.hpp"
#include "cpl/commands.hpp"
