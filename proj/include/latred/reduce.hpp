#pragma once

// Umbrella for the reduction family: LLL, BKZ and KZ.

#include "latred/bkz.hpp"
#include "latred/enumerate.hpp"
#include "latred/lll.hpp"
