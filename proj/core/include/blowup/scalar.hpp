#pragma once

#include <boost/multiprecision/float128.hpp>

namespace blowup {

/// 113-bit significand used where double precision cannot resolve the
/// geometry (deep approach to a weakly spiralling focus).
using quad = boost::multiprecision::float128;

}  // namespace blowup
