// Umbrella header.
#pragma once

#include "cd_check.hpp"
#include "constants.hpp"
#include "gamma.hpp"
#include "graph.hpp"
#include "identities.hpp"
#include "io.hpp"
#include "psi.hpp"
#include "psi_calc.hpp"
#include "report_io.hpp"
#include "ricci_flat.hpp"
