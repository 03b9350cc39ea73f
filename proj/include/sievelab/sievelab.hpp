#pragma once

// Exact decision procedures for covers of the canonical Grothendieck
// topology in three concrete categories: finitely generated modules over the
// integers, finite sets, and finite topological spaces.

#include "sievelab/abelian.hpp"
#include "sievelab/errors.hpp"
#include "sievelab/finset.hpp"
#include "sievelab/fintop.hpp"
#include "sievelab/int_matrix.hpp"
#include "sievelab/integer.hpp"
#include "sievelab/normal_forms.hpp"
#include "sievelab/verdict.hpp"
#include "sievelab/zsieve.hpp"
