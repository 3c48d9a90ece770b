#pragma once

// Umbrella header for the whole library.

#include "confract/calculus.hpp"
#include "confract/cli.hpp"
#include "confract/expr.hpp"
#include "confract/io.hpp"
#include "confract/ivp.hpp"
#include "confract/linear.hpp"
#include "confract/problem.hpp"
#include "confract/quadrature.hpp"
#include "confract/scalar_fn.hpp"
#include "confract/solver.hpp"
#include "confract/trajectory.hpp"
#include "confract/tube.hpp"
#include "confract/types.hpp"
