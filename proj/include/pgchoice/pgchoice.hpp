#pragma once

#include "pgchoice/bayes_linear.hpp"
#include "pgchoice/diagnostics.hpp"
#include "pgchoice/error.hpp"
#include "pgchoice/io.hpp"
#include "pgchoice/model.hpp"
#include "pgchoice/randvar.hpp"
#include "pgchoice/rng.hpp"
#include "pgchoice/samplers.hpp"
#include "pgchoice/types.hpp"
#include "pgchoice/version.hpp"
