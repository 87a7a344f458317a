#pragma once

#include <hwl/analysis.hpp>
#include <hwl/crofton.hpp>
#include <hwl/errors.hpp>
#include <hwl/fieldsim.hpp>
#include <hwl/geometry.hpp>
#include <hwl/montecarlo.hpp>
#include <hwl/parallel.hpp>
#include <hwl/riesz.hpp>
#include <hwl/rng.hpp>
#include <hwl/spectral.hpp>
