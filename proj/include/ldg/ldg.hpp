#pragma once

#include "ldg/errors.hpp"
#include "ldg/mesh.hpp"
#include "ldg/params.hpp"
#include "ldg/boundary.hpp"
#include "ldg/qfield.hpp"
#include "ldg/optics.hpp"
#include "ldg/assembly.hpp"
#include "ldg/forward.hpp"
#include "ldg/bayes.hpp"
#include "ldg/mcmc.hpp"
#include "ldg/chain_stats.hpp"
#include "ldg/config.hpp"
#include "ldg/presets.hpp"
#include "ldg/experiments.hpp"
