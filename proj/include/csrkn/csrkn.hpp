#pragma once

#include "csrkn/analysis.hpp"
#include "csrkn/cstableau.hpp"
#include "csrkn/errors.hpp"
#include "csrkn/golden.hpp"
#include "csrkn/integrator.hpp"
#include "csrkn/legendre.hpp"
#include "csrkn/parametric.hpp"
#include "csrkn/problems.hpp"
#include "csrkn/quadrature.hpp"
#include "csrkn/serialize.hpp"
#include "csrkn/tableau.hpp"
