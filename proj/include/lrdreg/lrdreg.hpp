#pragma once

#include "lrdreg/coefficients.hpp"
#include "lrdreg/conditions.hpp"
#include "lrdreg/config.hpp"
#include "lrdreg/csv.hpp"
#include "lrdreg/error.hpp"
#include "lrdreg/estimators.hpp"
#include "lrdreg/fft.hpp"
#include "lrdreg/functions.hpp"
#include "lrdreg/harness.hpp"
#include "lrdreg/innovations.hpp"
#include "lrdreg/kernels.hpp"
#include "lrdreg/numeric.hpp"
#include "lrdreg/parallel.hpp"
#include "lrdreg/processes.hpp"
#include "lrdreg/risk.hpp"
#include "lrdreg/scaling.hpp"
