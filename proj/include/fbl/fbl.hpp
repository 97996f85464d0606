#pragma once

#include "fbl/error.hpp"
#include "fbl/grid.hpp"
#include "fbl/fft.hpp"
#include "fbl/field.hpp"
#include "fbl/bump.hpp"
#include "fbl/multiplier.hpp"
#include "fbl/calculus.hpp"
#include "fbl/norms.hpp"
#include "fbl/random_fields.hpp"
#include "fbl/quadrature.hpp"
#include "fbl/littlewood_paley.hpp"
#include "fbl/boussinesq.hpp"
#include "fbl/diagnostics.hpp"
#include "fbl/commutator_lab.hpp"
#include "fbl/io.hpp"
#include "fbl/config.hpp"
#include "fbl/runner.hpp"
