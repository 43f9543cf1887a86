#pragma once

#include "seriation/error.hpp"
#include "seriation/rng.hpp"
#include "seriation/graph.hpp"
#include "seriation/graphon.hpp"
#include "seriation/ordering.hpp"
#include "seriation/spectral.hpp"
#include "seriation/schedule.hpp"
#include "seriation/error_rooting.hpp"
#include "seriation/estimation.hpp"
#include "seriation/robinson_test.hpp"
