#pragma once

#include "fucik/eigensolver.hpp"
#include "fucik/error.hpp"
#include "fucik/expr.hpp"
#include "fucik/numfmt.hpp"
#include "fucik/parallel.hpp"
#include "fucik/prufer.hpp"
#include "fucik/quadrature.hpp"
#include "fucik/spectral.hpp"
