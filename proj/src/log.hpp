#pragma once

#include <string_view>

namespace adbvp::detail {

enum class LogLevel { error = 0, info = 1, debug = 2 };

/// Threshold from ANISO_DBVP_LOG (error | info | debug), read once; default error.
LogLevel log_threshold();

void log(LogLevel level, std::string_view message);

}  // namespace adbvp::detail
