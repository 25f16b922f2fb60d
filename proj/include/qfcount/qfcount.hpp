#pragma once

#include "arith.hpp"
#include "constants.hpp"
#include "counting.hpp"
#include "density.hpp"
#include "enumerate.hpp"
#include "error.hpp"
#include "exact.hpp"
#include "fixtures.hpp"
#include "form_io.hpp"
#include "lfunc.hpp"
#include "numeric.hpp"
#include "padic.hpp"
#include "qform.hpp"
#include "singular.hpp"
