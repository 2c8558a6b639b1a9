#pragma once

#include <stdexcept>
#include <string>

namespace qpv {

/// File could not be opened, read or written.
class IoError : public std::runtime_error {
public:
    explicit IoError(const std::string& what) : std::runtime_error(what) {
    }
};

}  // namespace qpv
