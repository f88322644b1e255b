#pragma once

#include "spdc/biphoton_state.hpp"
#include "spdc/crystal_optics.hpp"
#include "spdc/geometry.hpp"
#include "spdc/materials.hpp"
#include "spdc/measurement.hpp"
#include "spdc/scenario.hpp"
#include "spdc/table.hpp"
