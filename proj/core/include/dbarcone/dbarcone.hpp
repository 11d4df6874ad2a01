#pragma once

#include "dbarcone/charts.hpp"
#include "dbarcone/error.hpp"
#include "dbarcone/fixtures.hpp"
#include "dbarcone/form.hpp"
#include "dbarcone/measure.hpp"
#include "dbarcone/polynomial.hpp"
#include "dbarcone/quadrature.hpp"
#include "dbarcone/solver.hpp"
#include "dbarcone/types.hpp"
#include "dbarcone/variety.hpp"
#include "dbarcone/verify.hpp"
