#pragma once

#include "bilocal/correlations.hpp"
#include "bilocal/eigen.hpp"
#include "bilocal/error.hpp"
#include "bilocal/matrix.hpp"
#include "bilocal/monogamy.hpp"
#include "bilocal/nelder_mead.hpp"
#include "bilocal/network.hpp"
#include "bilocal/optimize.hpp"
#include "bilocal/rng.hpp"
#include "bilocal/state.hpp"
#include "bilocal/vec3.hpp"
#include "bilocal/verify.hpp"
