#pragma once

/* Umbrella header for the operator-ordering calculus:
 *
 *   fock.hpp        truncated number-basis operators and ladder matrices
 *   polynomial.hpp  quadratic symbols in the position/momentum quadratures
 *   orderings.hpp   ordering conventions, moment tables, ordered exponentials
 *   gwt.hpp         scalar contractions connecting ordered exponentials
 *   gaussian.hpp    planar Gaussian integrals and the displacement-plane
 *                   resolution of bilinear exponentials
 *   squeeze.hpp     squeeze operator: construction routes and normal symbol
 *   verify.hpp      acceptance registry with deterministic reporting
 */

#include "ordcalc/fock.hpp"
#include "ordcalc/gaussian.hpp"
#include "ordcalc/gwt.hpp"
#include "ordcalc/hermite.hpp"
#include "ordcalc/orderings.hpp"
#include "ordcalc/polynomial.hpp"
#include "ordcalc/quadrature_rules.hpp"
#include "ordcalc/squeeze.hpp"
#include "ordcalc/verify.hpp"
