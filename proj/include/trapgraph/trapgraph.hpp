#pragma once

#include "trapgraph/tanner.hpp"
#include "trapgraph/decomp.hpp"
#include "trapgraph/dp.hpp"
#include "trapgraph/oracle.hpp"
#include "trapgraph/witness.hpp"
#include "trapgraph/report.hpp"
