#pragma once

#include <stdexcept>
#include <string>

namespace judgekit {

// Base class for all judgekit failures.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// The endpoint could not be reached or returned a broken response. Kept
// distinct from content-level problems (a reply we received but could not
// interpret), which callers handle as Verdict::Unparseable or a plain Error.
class TransportError : public Error {
 public:
  explicit TransportError(const std::string& what) : Error(what) {}
};

}  // namespace judgekit
