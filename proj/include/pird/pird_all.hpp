#pragma once

#include "pird/errors.hpp"
#include "pird/ingest.hpp"
#include "pird/io.hpp"
#include "pird/lattice.hpp"
#include "pird/pird.hpp"
#include "pird/spectral.hpp"
#include "pird/surrogate.hpp"
#include "pird/sweep.hpp"
#include "pird/var_model.hpp"
