#pragma once

/// Convenience umbrella header.

#include "fit.hpp"
#include "io.hpp"
#include "layout.hpp"
#include "model.hpp"
#include "thermal.hpp"
#include "threshold.hpp"
