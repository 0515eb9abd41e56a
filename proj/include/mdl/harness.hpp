#pragma once

// Experiment harness and I/O. Needs the vendored nlohmann/json and CLI11
// headers on the include path (the mdl_io CMake target).

#include "mdl/mdl.hpp"

#include "mdl/io/json.hpp"
#include "mdl/harness/config.hpp"
#include "mdl/harness/records.hpp"
#include "mdl/harness/baselines.hpp"
#include "mdl/harness/rmdl.hpp"
#include "mdl/harness/experiment.hpp"
