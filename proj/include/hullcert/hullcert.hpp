#ifndef HULLCERT_HULLCERT_HPP
#define HULLCERT_HULLCERT_HPP

#include "epsilon.hpp"
#include "error.hpp"
#include "evaluation.hpp"
#include "hull.hpp"
#include "io.hpp"
#include "matrix.hpp"
#include "metrics.hpp"
#include "projection.hpp"
#include "report.hpp"

#endif
