#pragma once

#include <stdexcept>
#include <string>

namespace twistor {

// Every library failure is reported through this type; the message is the
// user-facing explanation.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace twistor
