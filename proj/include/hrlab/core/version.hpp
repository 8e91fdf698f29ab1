#ifndef HRLAB_CORE_VERSION_HPP
#define HRLAB_CORE_VERSION_HPP

namespace hrlab {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace hrlab

#endif  // HRLAB_CORE_VERSION_HPP
