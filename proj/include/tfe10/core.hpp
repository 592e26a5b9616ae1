#pragma once

#include "tfe10/core/conic.hpp"
#include "tfe10/core/grid.hpp"
#include "tfe10/core/newton.hpp"
#include "tfe10/core/quadrature.hpp"
#include "tfe10/core/special_functions.hpp"
#include "tfe10/errors.hpp"
