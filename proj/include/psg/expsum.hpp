#pragma once

#include "psg/expsum/bounds.hpp"
#include "psg/expsum/heath_brown.hpp"
#include "psg/expsum/phase.hpp"
#include "psg/expsum/psi_diff.hpp"
#include "psg/expsum/regression.hpp"
#include "psg/expsum/sums.hpp"
