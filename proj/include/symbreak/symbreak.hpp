#ifndef SYMBREAK_SYMBREAK_HPP
#define SYMBREAK_SYMBREAK_HPP

#include "symbreak/automorphism.hpp"
#include "symbreak/bench.hpp"
#include "symbreak/coloured_graph.hpp"
#include "symbreak/csp.hpp"
#include "symbreak/error.hpp"
#include "symbreak/oracle.hpp"
#include "symbreak/perm_group.hpp"
#include "symbreak/permutation.hpp"
#include "symbreak/program.hpp"
#include "symbreak/propagation.hpp"
#include "symbreak/sbc.hpp"
#include "symbreak/smodels.hpp"
#include "symbreak/valsym.hpp"

#endif
