#pragma once

// Umbrella header.

#include "bgls/domain.hpp"
#include "bgls/fit.hpp"
#include "bgls/gamma.hpp"
#include "bgls/integrate.hpp"
#include "bgls/poincare.hpp"
#include "bgls/psi.hpp"
#include "bgls/quadrature.hpp"
#include "bgls/radial.hpp"
#include "bgls/weighted.hpp"
