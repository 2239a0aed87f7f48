#pragma once

#include "gwlab/analysis/bounds.hpp"
#include "gwlab/analysis/clusters.hpp"
#include "gwlab/analysis/events.hpp"
#include "gwlab/analysis/hitting.hpp"
#include "gwlab/analysis/lemmas.hpp"
