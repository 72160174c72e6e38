/* Copyright 2026 The ttolab Authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

       http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License. */

#ifndef TTOLAB_ERROR_HPP
#define TTOLAB_ERROR_HPP

#include <complex>
#include <stdexcept>
#include <string>
#include <string_view>

namespace ttolab {

using Complex = std::complex<double>;

enum class ErrorCode {
  ZeroOutsideDisk,
  BadPhase,
  EmptyProduct,
  PoleHit,
  BadRate,
  BadPoint,
  QuadratureStall,
  BadGridSize,
  BasePointOutside,
  BasePointOnCircle,
  GridMismatch,
  BadDegree,
  WrongJumpSet,
  MethodMismatch,
  BadAlpha,
  TruncationTooSmall,
  UnknownIdentity,
  BadScenario,
  EmptyReport,
  ParseError,
  IoError,
  NoConvergence,
};

inline std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::ZeroOutsideDisk: return "ZeroOutsideDisk";
    case ErrorCode::BadPhase: return "BadPhase";
    case ErrorCode::EmptyProduct: return "EmptyProduct";
    case ErrorCode::PoleHit: return "PoleHit";
    case ErrorCode::BadRate: return "BadRate";
    case ErrorCode::BadPoint: return "BadPoint";
    case ErrorCode::QuadratureStall: return "QuadratureStall";
    case ErrorCode::BadGridSize: return "BadGridSize";
    case ErrorCode::BasePointOutside: return "BasePointOutside";
    case ErrorCode::BasePointOnCircle: return "BasePointOnCircle";
    case ErrorCode::GridMismatch: return "GridMismatch";
    case ErrorCode::BadDegree: return "BadDegree";
    case ErrorCode::WrongJumpSet: return "WrongJumpSet";
    case ErrorCode::MethodMismatch: return "MethodMismatch";
    case ErrorCode::BadAlpha: return "BadAlpha";
    case ErrorCode::TruncationTooSmall: return "TruncationTooSmall";
    case ErrorCode::UnknownIdentity: return "UnknownIdentity";
    case ErrorCode::BadScenario: return "BadScenario";
    case ErrorCode::EmptyReport: return "EmptyReport";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::IoError: return "IoError";
    case ErrorCode::NoConvergence: return "NoConvergence";
  }
  return "Unknown";
}

/// Exception carrying a machine-readable code; what() is "<Code>: <detail>".
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& detail)
      : std::runtime_error(std::string(to_string(code)) + ": " + detail), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace ttolab

#endif  // TTOLAB_ERROR_HPP
