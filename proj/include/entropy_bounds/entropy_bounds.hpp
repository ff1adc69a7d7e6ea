#pragma once

#include "entropy_bounds/afw.hpp"
#include "entropy_bounds/bounds.hpp"
#include "entropy_bounds/check.hpp"
#include "entropy_bounds/cli.hpp"
#include "entropy_bounds/config.hpp"
#include "entropy_bounds/contradiction.hpp"
#include "entropy_bounds/errors.hpp"
#include "entropy_bounds/hermitian.hpp"
#include "entropy_bounds/io.hpp"
#include "entropy_bounds/maxent.hpp"
#include "entropy_bounds/sampling.hpp"
#include "entropy_bounds/spectra.hpp"
#include "entropy_bounds/states.hpp"
