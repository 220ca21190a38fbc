#ifndef PBSIM_PBSIM_HPP
#define PBSIM_PBSIM_HPP

#include "analytic.hpp"
#include "builtin_scenarios.hpp"
#include "config.hpp"
#include "csv.hpp"
#include "dynamics.hpp"
#include "integrator.hpp"
#include "liouvillian.hpp"
#include "model.hpp"
#include "observables.hpp"
#include "operators.hpp"
#include "params.hpp"
#include "scenario.hpp"
#include "steadystate.hpp"
#include "types.hpp"

#endif
