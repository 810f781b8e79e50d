#pragma once

#include "xfam/error.hpp"
#include "xfam/port_graph.hpp"
#include "xfam/graph_io.hpp"
#include "xfam/enumerate.hpp"
#include "xfam/view.hpp"
#include "xfam/agent.hpp"
#include "xfam/uxs.hpp"
#include "xfam/family.hpp"
#include "xfam/explore.hpp"
#include "xfam/oracle.hpp"
#include "xfam/refuter.hpp"
#include "xfam/registry.hpp"
