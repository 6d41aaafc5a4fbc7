#pragma once

#include "errors.hpp"
#include "model.hpp"
#include "linalg.hpp"
#include "solver.hpp"
#include "oracle.hpp"
#include "correlators.hpp"
#include "sixvertex.hpp"
#include "analysis.hpp"
