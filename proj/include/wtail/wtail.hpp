#pragma once

// Umbrella header for the library (the CLI driver lives in wtail/cli.hpp).

#include "wtail/asymptotics.hpp"
#include "wtail/error.hpp"
#include "wtail/estimator.hpp"
#include "wtail/expr.hpp"
#include "wtail/gammainc.hpp"
#include "wtail/mc.hpp"
#include "wtail/normal.hpp"
#include "wtail/quadrature.hpp"
#include "wtail/rng.hpp"
#include "wtail/roots.hpp"
#include "wtail/sample.hpp"
#include "wtail/scorefn.hpp"
#include "wtail/tailmodels.hpp"
