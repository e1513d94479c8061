#pragma once

#include "d3c/analytics.hpp"
#include "d3c/audit.hpp"
#include "d3c/bits.hpp"
#include "d3c/combinatorics.hpp"
#include "d3c/composer.hpp"
#include "d3c/engine.hpp"
#include "d3c/error.hpp"
#include "d3c/rational.hpp"
#include "d3c/scheme.hpp"
#include "d3c/shuffle.hpp"
