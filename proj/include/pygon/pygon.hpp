#pragma once

#include "pygon/rng.hpp"
#include "pygon/graph.hpp"
#include "pygon/graph_io.hpp"
#include "pygon/planting.hpp"
#include "pygon/thresholds.hpp"
#include "pygon/features.hpp"
#include "pygon/model.hpp"
#include "pygon/train.hpp"
#include "pygon/cleaning.hpp"
#include "pygon/harness.hpp"
#include "pygon/report.hpp"
#include "pygon/config.hpp"
