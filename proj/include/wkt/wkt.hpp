#pragma once

#include "wkt/errors.hpp"
#include "wkt/special.hpp"
#include "wkt/quadrature.hpp"
#include "wkt/kernel.hpp"
#include "wkt/profile.hpp"
#include "wkt/transform.hpp"
#include "wkt/gauges.hpp"
#include "wkt/ranges.hpp"
#include "wkt/verify.hpp"
