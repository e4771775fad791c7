#pragma once

// Umbrella header.

#include "core.hpp"
#include "product.hpp"
#include "quadrature.hpp"
#include "integral.hpp"
#include "reference.hpp"
