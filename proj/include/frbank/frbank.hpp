#pragma once

#include "frbank/aggregates.hpp"
#include "frbank/banking.hpp"
#include "frbank/calibration.hpp"
#include "frbank/common.hpp"
#include "frbank/econometrics.hpp"
#include "frbank/equilibrium.hpp"
#include "frbank/io.hpp"
#include "frbank/policy.hpp"
#include "frbank/preferences.hpp"
#include "frbank/rootfind.hpp"
#include "frbank/scenario.hpp"
#include "frbank/simplex.hpp"
