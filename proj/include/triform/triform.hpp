#pragma once

// Umbrella header for the whole library.

#include "triform/common.hpp"
#include "triform/matrix.hpp"
#include "triform/lorentz.hpp"
#include "triform/representation.hpp"
#include "triform/special.hpp"
#include "triform/quadrature.hpp"
#include "triform/trilinear.hpp"
#include "triform/symmetric_space.hpp"
