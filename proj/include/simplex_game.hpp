#pragma once

#include "simplex_game/errors.hpp"
#include "simplex_game/simplex_geometry.hpp"
#include "simplex_game/random.hpp"
#include "simplex_game/game_core.hpp"
#include "simplex_game/learning_dynamics.hpp"
#include "simplex_game/equilibrium_oracle.hpp"
#include "simplex_game/replica_analytics.hpp"
#include "simplex_game/serialization.hpp"
#include "simplex_game/experiment_config.hpp"
#include "simplex_game/harness.hpp"
