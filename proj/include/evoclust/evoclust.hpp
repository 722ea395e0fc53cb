#pragma once

// Umbrella header for the evoclust library.

#include "evoclust/baselines.hpp"
#include "evoclust/csv.hpp"
#include "evoclust/dataset.hpp"
#include "evoclust/ea.hpp"
#include "evoclust/errors.hpp"
#include "evoclust/gaussian.hpp"
#include "evoclust/metrics.hpp"
#include "evoclust/parallel.hpp"
#include "evoclust/rng.hpp"
#include "evoclust/svg.hpp"
#include "evoclust/synthetic.hpp"
