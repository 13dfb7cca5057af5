#pragma once

#include "pshlab/conjecture.hpp"
#include "pshlab/distribution.hpp"
#include "pshlab/io.hpp"
#include "pshlab/numeric.hpp"
#include "pshlab/orlicz.hpp"
#include "pshlab/quadrature.hpp"
#include "pshlab/radial.hpp"
#include "pshlab/verify.hpp"
#include "pshlab/weight.hpp"
