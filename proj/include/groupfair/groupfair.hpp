#pragma once

// Umbrella header for the whole library.

#include "groupfair/dataset.hpp"
#include "groupfair/errors.hpp"
#include "groupfair/experiments.hpp"
#include "groupfair/history.hpp"
#include "groupfair/instance.hpp"
#include "groupfair/numerics.hpp"
#include "groupfair/policies.hpp"
#include "groupfair/rng.hpp"
