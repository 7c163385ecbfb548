#pragma once

#include "cpquad/errors.hpp"
#include "cpquad/field.hpp"
#include "cpquad/geometry.hpp"
#include "cpquad/harness.hpp"
#include "cpquad/integrate.hpp"
#include "cpquad/jacobian.hpp"
#include "cpquad/kernels.hpp"
#include "cpquad/parallel.hpp"
#include "cpquad/vec.hpp"
