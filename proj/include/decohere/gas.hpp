// gas.hpp: homogeneous gas medium: Hamiltonian, refraction index, kernels.
#pragma once

#include "decohere/gas/amplitude.hpp"
#include "decohere/gas/config.hpp"
#include "decohere/gas/grid.hpp"
#include "decohere/gas/hamiltonian.hpp"
#include "decohere/gas/kernel.hpp"
#include "decohere/gas/potential.hpp"
#include "decohere/gas/refraction.hpp"
