#pragma once

#include "evacsim/cost.hpp"
#include "evacsim/errors.hpp"
#include "evacsim/geo.hpp"
#include "evacsim/matrix.hpp"
#include "evacsim/metrics.hpp"
#include "evacsim/network.hpp"
#include "evacsim/partition.hpp"
#include "evacsim/runner.hpp"
#include "evacsim/scenario.hpp"
#include "evacsim/solver.hpp"
#include "evacsim/synthetic.hpp"
#include "evacsim/travel.hpp"
