#pragma once

#include "capres/catalog.hpp"
#include "capres/costmodel.hpp"
#include "capres/eo.hpp"
#include "capres/error.hpp"
#include "capres/harness.hpp"
#include "capres/memetic.hpp"
#include "capres/netmodel.hpp"
#include "capres/placement.hpp"
#include "capres/powerflow.hpp"
#include "capres/resonance.hpp"
#include "capres/stats.hpp"
