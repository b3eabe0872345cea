/**
 * @file rwpoly.hpp
 * @brief Umbrella header for the rwpoly library.
 */
#pragma once

#include "rwpoly/asymptotics.hpp"
#include "rwpoly/chain.hpp"
#include "rwpoly/chain_model.hpp"
#include "rwpoly/error.hpp"
#include "rwpoly/expression.hpp"
#include "rwpoly/extrapolation.hpp"
#include "rwpoly/families.hpp"
#include "rwpoly/measure_to_chain.hpp"
#include "rwpoly/monte_carlo.hpp"
#include "rwpoly/normalization.hpp"
#include "rwpoly/numeric.hpp"
#include "rwpoly/polynomials.hpp"
#include "rwpoly/spectral_measure.hpp"
#include "rwpoly/support_edges.hpp"
#include "rwpoly/text_format.hpp"
#include "rwpoly/tridiagonal.hpp"
