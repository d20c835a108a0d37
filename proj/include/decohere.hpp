// decohere.hpp: everything except the application layer.
#pragma once

#include "decohere/collision.hpp"
#include "decohere/evolution.hpp"
#include "decohere/fit.hpp"
#include "decohere/gas.hpp"
#include "decohere/generator.hpp"
#include "decohere/lattice.hpp"
#include "decohere/linalg.hpp"
#include "decohere/oracle.hpp"
#include "decohere/random.hpp"
#include "decohere/slabstep.hpp"
#include "decohere/young.hpp"
