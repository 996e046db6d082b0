// pauliscope.hpp: the numerical library (no CLI or JSON dependencies)

#pragma once

#include "classify.hpp"
#include "criteria.hpp"
#include "entangle.hpp"
#include "invariants.hpp"
#include "statecore.hpp"
#include "types.hpp"
