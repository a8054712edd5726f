#pragma once

#include "probpoly/circuit.hpp"
#include "probpoly/combinatorics.hpp"
#include "probpoly/kwise.hpp"
#include "probpoly/lb_lab.hpp"
#include "probpoly/polynomial.hpp"
#include "probpoly/ppw.hpp"
#include "probpoly/prob_poly.hpp"
#include "probpoly/pseudo_majority.hpp"
#include "probpoly/rat.hpp"
#include "probpoly/rng.hpp"
#include "probpoly/serialize.hpp"
#include "probpoly/truth_table.hpp"
