#include "cbd/lambda.hpp"

#include <algorithm>
#include <utility>

#include "cbd/errors.hpp"

namespace cbd {

namespace {

// Response tuple of one atom in sorted-content order, used to compare
// models whose contents are listed in different orders.
std::vector<Sign> canonical_responses(const LambdaModel& model,
                                      const std::vector<std::string>& sorted_contents,
                                      const std::string& atom_id) {
    std::vector<Sign> values;
    values.reserve(sorted_contents.size());
    for (const auto& content : sorted_contents)
        values.push_back(model.responses.at(content).at(atom_id));
    return values;
}

std::vector<std::string> sorted_contents(const LambdaModel& model) {
    std::vector<std::string> labels = model.contents;
    std::sort(labels.begin(), labels.end());
    return labels;
}

}  // namespace

LambdaModel reconstruct_lambda(const System& system, std::string_view context) {
    const Context* ctx = system.find_context(context);
    if (ctx == nullptr) throw Error("unknown context '" + std::string(context) + "'");
    const ContextPMF& pmf = system.pmfs.at(ctx->label);

    LambdaModel model;
    model.contents = ctx->measured;
    for (const auto& content : model.contents) model.responses[content];
    for (const auto& [outcome, probability] : pmf.entries) {
        if (probability == 0) continue;
        std::string id = outcome.str();
        model.atoms.push_back({id, probability});
        for (std::size_t k = 0; k < model.contents.size(); ++k)
            model.responses[model.contents[k]][id] = outcome.values[k];
    }
    return model;
}

std::map<OutcomeTuple, Rational> induced_joint(const LambdaModel& model) {
    std::map<OutcomeTuple, Rational> joint;
    for (const auto& atom : model.atoms) {
        std::vector<Sign> values;
        values.reserve(model.contents.size());
        for (const auto& content : model.contents)
            values.push_back(model.responses.at(content).at(atom.id));
        joint[OutcomeTuple(std::move(values))] += atom.probability;
    }
    return joint;
}

std::optional<std::map<std::string, std::string>> verify_factorization(
    const LambdaModel& model, const LambdaModel& refined) {
    std::vector<std::string> contents = sorted_contents(model);
    if (contents != sorted_contents(refined)) return std::nullopt;

    // Same joint over the shared contents, compared in a common order.
    std::map<std::vector<Sign>, Rational> lhs, rhs;
    for (const auto& atom : model.atoms)
        lhs[canonical_responses(model, contents, atom.id)] += atom.probability;
    for (const auto& atom : refined.atoms)
        rhs[canonical_responses(refined, contents, atom.id)] += atom.probability;
    auto nonzero = [](const std::map<std::vector<Sign>, Rational>& joint,
                      const std::vector<Sign>& key) {
        auto it = joint.find(key);
        return it == joint.end() ? Rational(0) : it->second;
    };
    for (const auto& [key, value] : lhs)
        if (value != nonzero(rhs, key)) return std::nullopt;
    for (const auto& [key, value] : rhs)
        if (value != nonzero(lhs, key)) return std::nullopt;

    std::map<std::vector<Sign>, std::string> target;  // response tuple -> model atom
    for (const auto& atom : model.atoms) {
        auto key = canonical_responses(model, contents, atom.id);
        if (!target.emplace(std::move(key), atom.id).second)
            return std::nullopt;  // split tuple: no single-valued h can push onto it
    }

    std::map<std::string, std::string> h;
    std::map<std::string, Rational> pushed;
    for (const auto& atom : refined.atoms) {
        auto it = target.find(canonical_responses(refined, contents, atom.id));
        if (it == target.end()) {
            if (atom.probability == 0) continue;  // massless stray atom, ignorable
            return std::nullopt;
        }
        h[atom.id] = it->second;
        pushed[it->second] += atom.probability;
    }
    for (const auto& atom : model.atoms) {
        auto it = pushed.find(atom.id);
        Rational mass = it == pushed.end() ? Rational(0) : it->second;
        if (mass != atom.probability) return std::nullopt;
    }
    return h;
}

}  // namespace cbd
