#ifndef PPLAB_VERSION_HPP
#define PPLAB_VERSION_HPP

namespace pplab {

inline constexpr const char* kVersion = "0.9.0";

}  // namespace pplab

#endif  // PPLAB_VERSION_HPP
