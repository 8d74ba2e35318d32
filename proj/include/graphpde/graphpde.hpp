#pragma once

#include "graphpde/calculus.hpp"
#include "graphpde/errors.hpp"
#include "graphpde/evolution.hpp"
#include "graphpde/function.hpp"
#include "graphpde/graph.hpp"
#include "graphpde/ground_state.hpp"
#include "graphpde/io.hpp"
#include "graphpde/matrix.hpp"
#include "graphpde/nls.hpp"
#include "graphpde/random.hpp"
#include "graphpde/spectral.hpp"
