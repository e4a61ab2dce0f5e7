#pragma once

#include "kepseries/asymptotics.hpp"
#include "kepseries/errors.hpp"
#include "kepseries/fourier.hpp"
#include "kepseries/histmath.hpp"
#include "kepseries/io.hpp"
#include "kepseries/kepler.hpp"
#include "kepseries/perturb.hpp"
#include "kepseries/specfun.hpp"
#include "kepseries/wkb.hpp"
