#pragma once

#include "hjholder/error.hpp"
#include "hjholder/core.hpp"
#include "hjholder/grid_io.hpp"
#include "hjholder/extremal.hpp"
#include "hjholder/variational.hpp"
#include "hjholder/barriers.hpp"
#include "hjholder/semi_lax.hpp"
#include "hjholder/scheme.hpp"
#include "hjholder/oscillation.hpp"
#include "hjholder/scaling.hpp"
#include "hjholder/experiments.hpp"
