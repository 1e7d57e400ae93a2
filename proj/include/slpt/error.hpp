#pragma once

#include <stdexcept>
#include <string>

namespace slpt {

enum class Errc {
  CyclicGrammar,
  MissingProduction,
  UnknownNonterminal,
  EmptyValue,
  ExpansionTooLarge,
  NotEnoughOccurrences,
  OutOfRange,
  UndefinedTransition,
  NotATree,
  IsRoot,
  NoSuchChild,
  NotAParenthesisOfThatKind,
  ParameterRepeated,
  RankMismatch,
  LengthMismatch,
  EmptyInput,
  TooLarge,
  DomainViolation,
  WrongAlphabet,
  InvalidEmbedding,
  NotCaterpillar,
  NotPrime,
  ValueTooLarge,
  ParseError,
};

inline const char* errc_name(Errc c) {
  switch (c) {
    case Errc::CyclicGrammar: return "CyclicGrammar";
    case Errc::MissingProduction: return "MissingProduction";
    case Errc::UnknownNonterminal: return "UnknownNonterminal";
    case Errc::EmptyValue: return "EmptyValue";
    case Errc::ExpansionTooLarge: return "ExpansionTooLarge";
    case Errc::NotEnoughOccurrences: return "NotEnoughOccurrences";
    case Errc::OutOfRange: return "OutOfRange";
    case Errc::UndefinedTransition: return "UndefinedTransition";
    case Errc::NotATree: return "NotATree";
    case Errc::IsRoot: return "IsRoot";
    case Errc::NoSuchChild: return "NoSuchChild";
    case Errc::NotAParenthesisOfThatKind: return "NotAParenthesisOfThatKind";
    case Errc::ParameterRepeated: return "ParameterRepeated";
    case Errc::RankMismatch: return "RankMismatch";
    case Errc::LengthMismatch: return "LengthMismatch";
    case Errc::EmptyInput: return "EmptyInput";
    case Errc::TooLarge: return "TooLarge";
    case Errc::DomainViolation: return "DomainViolation";
    case Errc::WrongAlphabet: return "WrongAlphabet";
    case Errc::InvalidEmbedding: return "InvalidEmbedding";
    case Errc::NotCaterpillar: return "NotCaterpillar";
    case Errc::NotPrime: return "NotPrime";
    case Errc::ValueTooLarge: return "ValueTooLarge";
    case Errc::ParseError: return "ParseError";
  }
  return "Error";
}

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}
  Errc code() const { return code_; }

 private:
  Errc code_;
};

[[noreturn]] inline void raise(Errc code, const std::string& what) { throw Error(code, what); }

}  // namespace slpt
