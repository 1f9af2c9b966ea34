#pragma once

// Umbrella header.

#include "apx/bigreal.hpp"
#include "apx/cheb.hpp"
#include "apx/cli.hpp"
#include "apx/cut.hpp"
#include "apx/dense_ref.hpp"
#include "apx/exp_integral.hpp"
#include "apx/exp_recip.hpp"
#include "apx/expsum.hpp"
#include "apx/graph.hpp"
#include "apx/io.hpp"
#include "apx/lanczos.hpp"
#include "apx/matfun.hpp"
#include "apx/solve.hpp"
#include "apx/sparse.hpp"
#include "apx/ssv.hpp"
#include "apx/vec.hpp"
