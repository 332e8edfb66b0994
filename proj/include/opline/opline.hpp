#pragma once

// Umbrella header for the whole library.

#include "opline/errors.hpp"
#include "opline/linalg.hpp"
#include "opline/matrix_io.hpp"
#include "opline/mobius.hpp"
#include "opline/projective.hpp"
#include "opline/runner.hpp"
#include "opline/sl2.hpp"
#include "opline/spectral.hpp"
#include "opline/subspace.hpp"
#include "opline/symplectic.hpp"
#include "opline/tolerance.hpp"
