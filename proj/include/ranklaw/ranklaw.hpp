#pragma once

// Rank-size law fitting and ranking decomposition.

#include "ranklaw/fit.hpp"
#include "ranklaw/goodness.hpp"
#include "ranklaw/models.hpp"
#include "ranklaw/segmentation.hpp"
#include "ranklaw/series.hpp"
#include "ranklaw/stats.hpp"
#include "ranklaw/synth.hpp"
