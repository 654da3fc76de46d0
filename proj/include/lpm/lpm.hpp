#pragma once

#include "lpm/core/characteristic.hpp"
#include "lpm/core/eos.hpp"
#include "lpm/core/types.hpp"
#include "lpm/gfd/qrcp.hpp"
#include "lpm/gfd/stencil.hpp"
#include "lpm/gfd/taylor.hpp"
#include "lpm/io/config.hpp"
#include "lpm/io/run.hpp"
#include "lpm/io/snapshot.hpp"
#include "lpm/neighbor/bucket_index.hpp"
#include "lpm/neighbor/index.hpp"
#include "lpm/neighbor/tree_index.hpp"
#include "lpm/scenarios/scenarios.hpp"
#include "lpm/solver/axis_kernel.hpp"
#include "lpm/solver/boundary.hpp"
#include "lpm/solver/simulation.hpp"
#include "lpm/solver/split.hpp"
#include "lpm/solver/time_step.hpp"
#include "lpm/surface/ghosts.hpp"
#include "lpm/verification/convergence.hpp"
#include "lpm/verification/disk.hpp"
#include "lpm/verification/gresho.hpp"
#include "lpm/verification/muscl.hpp"
#include "lpm/verification/norms.hpp"
#include "lpm/verification/riemann.hpp"
