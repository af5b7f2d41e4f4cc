#pragma once

#include "paramosc/adiabaticity.hpp"
#include "paramosc/closed_form.hpp"
#include "paramosc/cpo.hpp"
#include "paramosc/errors.hpp"
#include "paramosc/io.hpp"
#include "paramosc/ode.hpp"
#include "paramosc/oracle.hpp"
#include "paramosc/quadrature.hpp"
#include "paramosc/schedule.hpp"
#include "paramosc/transition.hpp"
