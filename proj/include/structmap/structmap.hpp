#pragma once
//
// structmap : minimal-norm structured solutions of AX = B over Jordan/Lie
// algebras of orthosymmetric scalar products, with structured backward errors
// and pseudospectra built on top.
//

#include "structmap/types.hpp"
#include "structmap/version.hpp"
#include "structmap/structure.hpp"
#include "structmap/kernels.hpp"
#include "structmap/mapping.hpp"
#include "structmap/backward.hpp"
#include "structmap/pseudospectra.hpp"
#include "structmap/io.hpp"
