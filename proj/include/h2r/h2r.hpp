#pragma once

#include "h2r/errors.hpp"
#include "h2r/geometry.hpp"
#include "h2r/fourier.hpp"
#include "h2r/curves.hpp"
#include "h2r/quadrature.hpp"
#include "h2r/catenoid.hpp"
#include "h2r/jacobi.hpp"
#include "h2r/graph_solver.hpp"
#include "h2r/flux.hpp"
#include "h2r/annulus_solver.hpp"
#include "h2r/tallrect.hpp"
#include "h2r/obstruction.hpp"
#include "h2r/mesh_io.hpp"
#include "h2r/report.hpp"
#include "h2r/acceptance.hpp"
