#pragma once

#include "kfuks/errors.hpp"
#include "kfuks/tolerances.hpp"
#include "kfuks/wjet.hpp"
#include "kfuks/maps.hpp"
#include "kfuks/kernels.hpp"
#include "kfuks/reinhardt.hpp"
#include "kfuks/geometry.hpp"
#include "kfuks/scaling.hpp"
#include "kfuks/lab/config.hpp"
#include "kfuks/lab/experiments.hpp"
