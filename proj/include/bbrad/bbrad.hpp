#pragma once

// Umbrella header: thermal-radiation momentum diffusion, drag, decoherence,
// spectrum equilibrium, and the stochastic counterparts, in Gaussian cgs.

#include "bbrad/constants.hpp"
#include "bbrad/decoherence.hpp"
#include "bbrad/diffusion.hpp"
#include "bbrad/drag.hpp"
#include "bbrad/equilibrium.hpp"
#include "bbrad/errors.hpp"
#include "bbrad/polarizability.hpp"
#include "bbrad/quadrature.hpp"
#include "bbrad/result.hpp"
#include "bbrad/rng.hpp"
#include "bbrad/special.hpp"
#include "bbrad/stochastic.hpp"
#include "bbrad/verify.hpp"
