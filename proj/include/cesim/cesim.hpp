#pragma once

#include "model.hpp"
#include "random.hpp"
#include "slicing.hpp"
#include "plan.hpp"
#include "strategies.hpp"
#include "metrics.hpp"
#include "oracle.hpp"
#include "workload.hpp"
#include "io.hpp"
#include "sweep.hpp"
#include "verify.hpp"
