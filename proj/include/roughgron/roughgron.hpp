#pragma once

#include "roughgron/csv.hpp"
#include "roughgron/errors.hpp"
#include "roughgron/gronwall.hpp"
#include "roughgron/rde.hpp"
#include "roughgron/reflected.hpp"
#include "roughgron/rng.hpp"
#include "roughgron/rough_core.hpp"
#include "roughgron/rpde_heat.hpp"
#include "roughgron/variation.hpp"
