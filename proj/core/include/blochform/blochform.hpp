#pragma once

#include "blochform/analytic_solver.hpp"
#include "blochform/bloch_model.hpp"
#include "blochform/cubic_roots.hpp"
#include "blochform/errors.hpp"
#include "blochform/ode_oracle.hpp"
#include "blochform/regime_map.hpp"
#include "blochform/validation.hpp"
