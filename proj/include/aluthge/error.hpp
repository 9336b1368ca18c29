#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace aluthge {

enum class Errc {
  NotSquare,
  DimensionMismatch,
  NonFinite,
  NotHermitian,
  NotPSD,
  NoConvergence,
  AlgebraMismatch,
  NotProjection,
  NotPartialIsometry,
  NotMinimal,
  NotQuasiNormal,
  NotScalar,
  BadIndex,
  ZeroVector,
  InvalidArgument,
  Parse,
};

constexpr std::string_view errc_name(Errc code) {
  switch (code) {
    case Errc::NotSquare: return "NotSquare";
    case Errc::DimensionMismatch: return "DimensionMismatch";
    case Errc::NonFinite: return "NonFinite";
    case Errc::NotHermitian: return "NotHermitian";
    case Errc::NotPSD: return "NotPSD";
    case Errc::NoConvergence: return "NoConvergence";
    case Errc::AlgebraMismatch: return "AlgebraMismatch";
    case Errc::NotProjection: return "NotProjection";
    case Errc::NotPartialIsometry: return "NotPartialIsometry";
    case Errc::NotMinimal: return "NotMinimal";
    case Errc::NotQuasiNormal: return "NotQuasiNormal";
    case Errc::NotScalar: return "NotScalar";
    case Errc::BadIndex: return "BadIndex";
    case Errc::ZeroVector: return "ZeroVector";
    case Errc::InvalidArgument: return "InvalidArgument";
    case Errc::Parse: return "Parse";
  }
  return "Unknown";
}

/// Single exception type for the library; the code identifies the failure class.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace aluthge
