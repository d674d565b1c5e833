#pragma once

#include "qheat/constrained.hpp"
#include "qheat/engine.hpp"
#include "qheat/expectations.hpp"
#include "qheat/numerics.hpp"
#include "qheat/optimize.hpp"
#include "qheat/oracle.hpp"
#include "qheat/priors.hpp"
#include "qheat/quadrature.hpp"
#include "qheat/verification.hpp"
