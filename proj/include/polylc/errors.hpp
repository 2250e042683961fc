#pragma once
#include <stdexcept>
#include <string>

namespace polylc {

enum class ErrorCode {
  ZeroVector,
  NotAVertex,
  EmptyResult,
  NotASimplex,
  DegeneratePolytope,
  NotInComplex,
  IncompleteStar,
  InvalidComplex,
  EmptyVoxelization,
  DisconnectedVoxelization,
  NotPseudoManifold,
  UnknownCellType,
  SmoothnessRequired,
  FanNotPolytopal,
  InvalidCase,
  NerveNotQuadrilateral,
  ConeMismatch,
  NotRealizable,
  NonDisjointBadEdges,
  UnsupportedDegree,
  Disconnected,
  InvalidFraction,
  InvalidWeights,
  InconsistentKind,
  NotATree,
  GenusOne,
  NotLogCanonicalConfiguration,
  UnknownRow,
  ParseError,
  InvalidArgument,
};

const char* error_name(ErrorCode c);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode c, const std::string& what)
      : std::runtime_error(std::string(error_name(c)) + ": " + what), code_(c) {}
  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace polylc
