#pragma once

#include "triopo/acceptance.hpp"
#include "triopo/commands.hpp"
#include "triopo/criteria.hpp"
#include "triopo/errors.hpp"
#include "triopo/io.hpp"
#include "triopo/linearization.hpp"
#include "triopo/params.hpp"
#include "triopo/rng.hpp"
#include "triopo/run_config.hpp"
#include "triopo/sde.hpp"
#include "triopo/spectra.hpp"
#include "triopo/stats.hpp"
#include "triopo/steady_state.hpp"
