#pragma once

#include <string>
#include <vector>

#include "dbarcone/form.hpp"
#include "dbarcone/variety.hpp"

namespace dbarcone {

struct FixtureInfo {
  std::string name;
  std::string description;
};

/// line2, quadric-cone, cusp, cone6.
const std::vector<FixtureInfo>& fixtures();

/// Throws InvalidArgument for an unknown name.
Variety fixture_variety(const std::string& name);

/// h = 1 + z_1, r0 = 0.3, R = 1 in the fixture's ambient dimension.
BumpSpec default_bump(std::size_t dim);

}  // namespace dbarcone
