#pragma once

// Umbrella header: exact stochastic-game analysis with Blackwell-Nash
// certification, for discrete- and continuous-time finite games.

#include "sgnash/blackwell.hpp"
#include "sgnash/continuous.hpp"
#include "sgnash/equilibrium.hpp"
#include "sgnash/game.hpp"
#include "sgnash/json_io.hpp"
#include "sgnash/matrix.hpp"
#include "sgnash/mdp.hpp"
#include "sgnash/polynomial.hpp"
#include "sgnash/rational.hpp"
#include "sgnash/rational_function.hpp"
#include "sgnash/scalar.hpp"
