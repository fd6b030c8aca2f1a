#pragma once

#include "lzsm/bessel.hpp"
#include "lzsm/bloch.hpp"
#include "lzsm/dispersive.hpp"
#include "lzsm/error.hpp"
#include "lzsm/estimation.hpp"
#include "lzsm/interferogram.hpp"
#include "lzsm/oracle_compare.hpp"
#include "lzsm/params.hpp"
#include "lzsm/phase_map.hpp"
#include "lzsm/spectral.hpp"
#include "lzsm/steady_state.hpp"
#include "lzsm/two_level.hpp"
#include "lzsm/units.hpp"
