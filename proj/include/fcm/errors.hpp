// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>

namespace fcm {

class Error : public std::runtime_error {
 public:
  Error(std::string kind, const std::string& what)
      : std::runtime_error(kind + ": " + what), kind_(std::move(kind)) {}
  const std::string& kind() const { return kind_; }

 private:
  std::string kind_;
};

#define FCM_ERROR(Name)                                                        \
  struct Name : Error {                                                        \
    explicit Name(const std::string& w) : Error(#Name, w) {}                   \
  }

FCM_ERROR(InvalidArgument);
FCM_ERROR(TargetTooSmall);
FCM_ERROR(IncompatibleFields);
FCM_ERROR(DivisionByApparentZero);
FCM_ERROR(PrecisionExhausted);
FCM_ERROR(NotAPower);
FCM_ERROR(NoDecay);
FCM_ERROR(InsufficientPrecision);
FCM_ERROR(PoleArgument);
FCM_ERROR(UnsupportedGenus);
FCM_ERROR(Unsupported);
FCM_ERROR(ModelMismatch);
FCM_ERROR(ModelInvalid);
FCM_ERROR(GaloisDataInsufficient);
FCM_ERROR(RamifiedAboveTheta);
FCM_ERROR(BasisExpansionFailure);
FCM_ERROR(SingularRecursion);
FCM_ERROR(ChainNotConverging);
FCM_ERROR(ConsistencyFailure);

#undef FCM_ERROR

}  // namespace fcm
