#ifndef MERITORDER_MERITORDER_HPP
#define MERITORDER_MERITORDER_HPP

#include "meritorder/balancing.hpp"
#include "meritorder/errors.hpp"
#include "meritorder/markets.hpp"
#include "meritorder/oracle.hpp"
#include "meritorder/power_system.hpp"
#include "meritorder/quadrature.hpp"
#include "meritorder/special_functions.hpp"
#include "meritorder/supply_distribution.hpp"
#include "meritorder/thresholds.hpp"

#endif // MERITORDER_MERITORDER_HPP
