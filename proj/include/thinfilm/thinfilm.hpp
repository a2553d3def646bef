#pragma once

// Umbrella header for the thin-film viscoelastic lubrication solver.

#include "thinfilm/config.hpp"
#include "thinfilm/constitutive.hpp"
#include "thinfilm/csv.hpp"
#include "thinfilm/errors.hpp"
#include "thinfilm/fd_weights.hpp"
#include "thinfilm/fields.hpp"
#include "thinfilm/fluid.hpp"
#include "thinfilm/gap_profile.hpp"
#include "thinfilm/ode45.hpp"
#include "thinfilm/quadrature.hpp"
#include "thinfilm/report_json.hpp"
#include "thinfilm/reynolds.hpp"
#include "thinfilm/validate.hpp"
#include "thinfilm/wall_closure.hpp"
