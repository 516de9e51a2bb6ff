#pragma once

#define SBMLSS_VERSION "0.1.0"

namespace sbmlss {
inline constexpr const char* kVersion = SBMLSS_VERSION;
inline constexpr const char* kSeedEnvVar = "SBMLSS_SEED";
}  // namespace sbmlss
