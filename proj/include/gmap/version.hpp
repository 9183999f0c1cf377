#ifndef GMAP_VERSION_HPP
#define GMAP_VERSION_HPP

#include <string_view>

namespace gmap {

inline constexpr std::string_view kToolName = "gmap";
inline constexpr std::string_view kToolVersion = "0.1.0";

} // namespace gmap

#endif
