#pragma once

#include "psg/arith_tables.hpp"
#include "psg/errors.hpp"
#include "psg/exact_arith.hpp"
#include "psg/expsum.hpp"
#include "psg/io.hpp"
#include "psg/parallel.hpp"
#include "psg/psets.hpp"
#include "psg/sieve.hpp"
#include "psg/singular.hpp"
#include "psg/ternary.hpp"
#include "psg/version.hpp"
