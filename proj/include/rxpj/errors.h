//
// rxpj - reaction practicality judgment from SMILES text
// SPDX-License-Identifier: Apache-2.0
//

#ifndef RXPJ_ERRORS_H_
#define RXPJ_ERRORS_H_

#include <stdexcept>
#include <string>
#include <string_view>

namespace rxpj {

// Base for every error the library raises. kind() is a stable, machine
// readable identifier (used verbatim by the CLI error line).
class Error: public std::runtime_error {
public:
  Error(std::string_view kind, const std::string &what)
      : std::runtime_error(what), kind_(kind) { }

  const std::string &kind() const noexcept { return kind_; }

private:
  std::string kind_;
};

#define RXPJ_DEFINE_ERROR(Name)                                                \
  class Name: public Error {                                                   \
  public:                                                                      \
    explicit Name(const std::string &what): Error(#Name, what) { }             \
  }

RXPJ_DEFINE_ERROR(MalformedReaction);
RXPJ_DEFINE_ERROR(UnbalancedBrackets);
RXPJ_DEFINE_ERROR(EmptyCorpus);
RXPJ_DEFINE_ERROR(CandidateAbsent);
RXPJ_DEFINE_ERROR(LengthMismatch);
RXPJ_DEFINE_ERROR(ShapeMismatch);
RXPJ_DEFINE_ERROR(NonFiniteGradient);
RXPJ_DEFINE_ERROR(DivergedTraining);
RXPJ_DEFINE_ERROR(TooFewRecords);
RXPJ_DEFINE_ERROR(EmptyEvaluation);
RXPJ_DEFINE_ERROR(SingleClassEvaluation);
RXPJ_DEFINE_ERROR(IoError);
RXPJ_DEFINE_ERROR(ConfigError);
RXPJ_DEFINE_ERROR(CheckpointError);

#undef RXPJ_DEFINE_ERROR

} // namespace rxpj

#endif // RXPJ_ERRORS_H_
