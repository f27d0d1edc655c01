#pragma once

// Umbrella header.

#include "carlo/accept_reject.hpp"
#include "carlo/csv.hpp"
#include "carlo/datasets.hpp"
#include "carlo/diagnostics.hpp"
#include "carlo/distributions.hpp"
#include "carlo/errors.hpp"
#include "carlo/integrate.hpp"
#include "carlo/mcmc.hpp"
#include "carlo/optimize.hpp"
#include "carlo/parallel.hpp"
#include "carlo/rng.hpp"
#include "carlo/search.hpp"
#include "carlo/special.hpp"
#include "carlo/trace_io.hpp"
#include "carlo/variance_reduction.hpp"
