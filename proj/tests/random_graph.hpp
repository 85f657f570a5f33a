#pragma once

#include "pathcert/random_graph.hpp"

namespace testing_support {
using namespace pathcert::random_graphs;
}  // namespace testing_support
