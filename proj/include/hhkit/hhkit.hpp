#pragma once

#include "hhkit/expr.hpp"
#include "hhkit/means.hpp"
#include "hhkit/quadrature.hpp"
#include "hhkit/convexity.hpp"
#include "hhkit/hh.hpp"
#include "hhkit/json_io.hpp"
#include "hhkit/search.hpp"
