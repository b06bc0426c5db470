#pragma once

#include "dataset.hpp"
#include "errors.hpp"
#include "field.hpp"
#include "geometry.hpp"
#include "gibls.hpp"
#include "heatmap.hpp"
#include "layout_io.hpp"
#include "matrix_io.hpp"
#include "metrics.hpp"
#include "oracle.hpp"
#include "parallel.hpp"
#include "report.hpp"
#include "rng.hpp"
#include "seqls.hpp"
#include "solver.hpp"
#include "special.hpp"
#include "standardize.hpp"
#include "version.hpp"
