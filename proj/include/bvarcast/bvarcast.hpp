#ifndef BVARCAST_BVARCAST_HPP
#define BVARCAST_BVARCAST_HPP

// Bayesian VAR forecasting for daily return panels: constant and
// time-varying volatility samplers, rolling one-step-ahead prediction, and
// point/density forecast evaluation.

#include "bvarcast/commands.hpp"

#endif
