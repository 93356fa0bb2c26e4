#pragma once

#include <string>
#include <variant>
#include <vector>

#include "phylosat/relation.hpp"

namespace phylosat {

enum class Side { Left, Right };

inline Side other(Side s) { return s == Side::Left ? Side::Right : Side::Left; }
inline const char* to_string(Side s) { return s == Side::Left ? "left" : "right"; }

/// Multiply the binomial by the trivial-flow variable.
struct AddZeroFlow {
  friend bool operator==(const AddZeroFlow&, const AddZeroFlow&) = default;
};

/// Replace `removed` by `added` on one side using the generator removed = added.
/// `generator` is carried as a plain relation so a verifier can judge it.
struct ApplyGenerator {
  Side side = Side::Left;
  FlowMultiset removed;
  FlowMultiset added;
  Relation generator;
  std::string case_tag;

  friend bool operator==(const ApplyGenerator&, const ApplyGenerator&) = default;
};

struct DeleteCommon {
  Flow flow;
  friend bool operator==(const DeleteCommon&, const DeleteCommon&) = default;
};

/// Terminal step: the residual relation is itself of degree <= 3.
struct EmitFinal {
  Relation generator;
  friend bool operator==(const EmitFinal&, const EmitFinal&) = default;
};

using Step = std::variant<AddZeroFlow, ApplyGenerator, DeleteCommon, EmitFinal>;

inline const char* step_kind(const Step& s) {
  switch (s.index()) {
    case 0: return "add_zero";
    case 1: return "apply";
    case 2: return "delete";
    default: return "final";
  }
}

/// Replayable proof that x_0^n * (x_L - x_R) lies in the ideal generated by
/// quadrics and cubics.
struct Certificate {
  Relation original;
  int n = 0;
  std::vector<Step> steps;

  friend bool operator==(const Certificate&, const Certificate&) = default;
};

}  // namespace phylosat
