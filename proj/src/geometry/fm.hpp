#pragma once

#include <cstdint>
#include <vector>

#include "rtpta/polyhedron.hpp"

namespace rtpta::geometry::fm {

// Scales `coeffs`/`bound` by a positive factor so that the coefficients are
// coprime integers. No-op for an all-zero row.
void normalize(std::vector<Rational> &coeffs, Rational &bound);

// Projects out `columns` from a constraint system of width `width`. The result
// has zero coefficients in those columns. Sets `empty` when a ground
// contradiction is derived. Redundant combinations are pruned with
// Chernikov's history criterion.
std::vector<LinearInequality> eliminate(std::vector<LinearInequality> rows, std::size_t width,
                                        std::vector<std::size_t> columns, bool &empty);

}  // namespace rtpta::geometry::fm
