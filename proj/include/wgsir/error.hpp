#pragma once

#include <stdexcept>
#include <string>

namespace wgsir {

/// Raised for invalid inputs and numerical degeneracies anywhere in the library.
class Error : public std::runtime_error
{
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

} // namespace wgsir
