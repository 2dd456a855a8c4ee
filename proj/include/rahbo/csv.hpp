#pragma once

#include <cstdio>
#include <string>

namespace rahbo {

// 17 significant digits: lossless round-trip for IEEE doubles, '.' decimal.
inline std::string format_real(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return std::string(buf);
}

}  // namespace rahbo
