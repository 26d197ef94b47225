#pragma once

#include "qperiod/errors.hpp"
#include "qperiod/rational.hpp"
#include "qperiod/graded_poly.hpp"
#include "qperiod/target.hpp"
#include "qperiod/hypergeom.hpp"
#include "qperiod/assembler.hpp"
#include "qperiod/validation.hpp"
#include "qperiod/config.hpp"
#include "qperiod/report.hpp"
#include "qperiod/suite.hpp"
