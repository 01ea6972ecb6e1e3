#pragma once

// Single include for the whole library (the CLI front end is separate in
// latred/cli.hpp because it pulls in the argument parser).

#include "latred/basis.hpp"
#include "latred/bkz.hpp"
#include "latred/bounds.hpp"
#include "latred/detect.hpp"
#include "latred/enumerate.hpp"
#include "latred/errors.hpp"
#include "latred/experiments.hpp"
#include "latred/gso.hpp"
#include "latred/hermite.hpp"
#include "latred/linalg.hpp"
#include "latred/lll.hpp"
#include "latred/mimo.hpp"
#include "latred/reduce.hpp"
#include "latred/rng.hpp"
