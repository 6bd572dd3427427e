#pragma once

#include "mps/axioms.hpp"
#include "mps/block.hpp"
#include "mps/call_graph.hpp"
#include "mps/enumerate.hpp"
#include "mps/fixtures.hpp"
#include "mps/ids.hpp"
#include "mps/indexed.hpp"
#include "mps/json_io.hpp"
#include "mps/order.hpp"
#include "mps/priority.hpp"
#include "mps/rights.hpp"
#include "mps/synthesis.hpp"
