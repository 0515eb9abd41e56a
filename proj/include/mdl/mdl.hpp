#pragma once

#include "mdl/error.hpp"
#include "mdl/random.hpp"
#include "mdl/simplex.hpp"

#include "mdl/core/types.hpp"
#include "mdl/core/param_space.hpp"
#include "mdl/core/instance.hpp"
#include "mdl/core/risk.hpp"
#include "mdl/core/matrix_game.hpp"

#include "mdl/format.hpp"
#include "mdl/learners/hedge.hpp"
#include "mdl/learners/bandit.hpp"
#include "mdl/learners/mirror_descent.hpp"
#include "mdl/learners/regret.hpp"
#include "mdl/learners/transcript.hpp"

#include "mdl/dynamics/iterations.hpp"
#include "mdl/dynamics/estimators.hpp"
#include "mdl/dynamics/solve_result.hpp"
#include "mdl/dynamics/solve_game.hpp"
#include "mdl/dynamics/mdl_solve.hpp"

#include "mdl/instances/generators.hpp"

#include "mdl/reductions/relax.hpp"
#include "mdl/reductions/gdro.hpp"
#include "mdl/reductions/nets.hpp"
