#pragma once

#include "perco/clustering.hpp"
#include "perco/detection.hpp"
#include "perco/distribution_io.hpp"
#include "perco/errors.hpp"
#include "perco/image.hpp"
#include "perco/lattice.hpp"
#include "perco/newman_ziff.hpp"
#include "perco/newman_ziff_modified.hpp"
#include "perco/rng.hpp"
