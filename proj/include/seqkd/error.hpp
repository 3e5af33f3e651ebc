#pragma once

#include <stdexcept>
#include <string>

namespace seqkd {

enum class Errc {
  EmptyState,
  DuplicatePath,
  ZeroNorm,
  UnknownPath,
  BasisIncomplete,
  BadWeights,
  UnknownLetter,
  PolicyLengthMismatch,
  LengthMismatch,
  ConfigInvalid,
  BadPath,
};

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& msg) : std::runtime_error(msg), code_(code) {}
  Errc code() const { return code_; }

 private:
  Errc code_;
};

}  // namespace seqkd
