#pragma once

#include "kdof/channels.hpp"
#include "kdof/dof.hpp"
#include "kdof/matrix_io.hpp"
#include "kdof/operator.hpp"
#include "kdof/quadrature.hpp"
#include "kdof/rng.hpp"
#include "kdof/sn_axioms.hpp"
#include "kdof/spaces.hpp"
#include "kdof/truncation.hpp"
#include "kdof/version.hpp"
#include "kdof/widths.hpp"
