#pragma once

#include "gwlab/analysis.hpp"
#include "gwlab/config.hpp"
#include "gwlab/experiments.hpp"
#include "gwlab/geometry.hpp"
#include "gwlab/io.hpp"
#include "gwlab/ordered_index.hpp"
#include "gwlab/processes.hpp"
#include "gwlab/rng.hpp"
#include "gwlab/suites.hpp"
#include "gwlab/walk.hpp"
