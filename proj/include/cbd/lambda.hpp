#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "cbd/rational.hpp"
#include "cbd/system.hpp"

namespace cbd {

struct LambdaAtom {
    std::string id;
    Rational probability;
};

/// A hidden variable for one context: a finite λ with deterministic
/// response functions, one per measured content, whose pushforward is the
/// context's joint distribution.
struct LambdaModel {
    std::vector<std::string> contents;  // measured contents, context order
    std::vector<LambdaAtom> atoms;
    /// content label -> (atom id -> response value)
    std::map<std::string, std::map<std::string, Sign>> responses;
};

/// The canonical minimal model: one atom per positive-probability outcome
/// tuple (identified by its "+"/"-" string), responses = coordinate
/// projections. Throws Error on an unknown context.
LambdaModel reconstruct_lambda(const System& system, std::string_view context);

/// Joint distribution induced by a model over its contents (in the model's
/// content order).
std::map<OutcomeTuple, Rational> induced_joint(const LambdaModel& model);

/// If `refined` induces the same joint as `model` (over the same content
/// set, any order), returns the factorization h mapping each refined atom
/// to the model atom with the same response tuple, verified to push the
/// refined probabilities exactly onto the model's. Returns none when the
/// joints differ or no such h exists (e.g. the target model splits one
/// response tuple across several atoms).
std::optional<std::map<std::string, std::string>> verify_factorization(
    const LambdaModel& model, const LambdaModel& refined);

}  // namespace cbd
