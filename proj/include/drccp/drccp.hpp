#pragma once

#include "drccp/common.hpp"
#include "drccp/instance.hpp"
#include "drccp/model.hpp"
#include "drccp/lp.hpp"
#include "drccp/solver.hpp"
#include "drccp/resource.hpp"
#include "drccp/quantile.hpp"
#include "drccp/formulation.hpp"
#include "drccp/mixing.hpp"
#include "drccp/oracle.hpp"
#include "drccp/apps.hpp"
#include "drccp/io.hpp"
