#pragma once

#include "kepseries/specfun/bessel.hpp"
#include "kepseries/specfun/gamma.hpp"
#include "kepseries/specfun/log_value.hpp"
#include "kepseries/specfun/ode.hpp"
#include "kepseries/specfun/quadrature.hpp"
#include "kepseries/specfun/roots.hpp"
