#pragma once

#include "cofkit/cofactor.hpp"
#include "cofkit/error.hpp"
#include "cofkit/habit.hpp"
#include "cofkit/lattice.hpp"
#include "cofkit/linalg3.hpp"
#include "cofkit/materials.hpp"
#include "cofkit/qchull.hpp"
#include "cofkit/startwin.hpp"
#include "cofkit/tolerances.hpp"
#include "cofkit/twinning.hpp"
