#pragma once

#include "conenorm/cone_geometry.hpp"
#include "conenorm/corollaries.hpp"
#include "conenorm/experiment.hpp"
#include "conenorm/io.hpp"
#include "conenorm/log_sobolev.hpp"
#include "conenorm/matrix.hpp"
#include "conenorm/norm_spec.hpp"
#include "conenorm/norm_spec_json.hpp"
#include "conenorm/oracle.hpp"
#include "conenorm/power_method.hpp"

namespace conenorm {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace conenorm
