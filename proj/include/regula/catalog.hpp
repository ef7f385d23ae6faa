#pragma once

#include <string>
#include <vector>

#include "regula/operators.hpp"
#include "regula/vec.hpp"

namespace regula {

/// A cataloged example operator with a starting point inside its domain.
struct CatalogEntry {
  std::string name;
  OperatorSpec spec;
  Vec x0;
};

/// The stock operators every certification and verification sweep runs
/// against: boundary-tight scalings in dimensions 1-3, a plane rotation, a
/// five-dimensional affine contraction, and ball-restricted variants of the
/// self-mapping ones. Each entry has a known fixed point.
std::vector<CatalogEntry> standard_catalog();

}  // namespace regula
