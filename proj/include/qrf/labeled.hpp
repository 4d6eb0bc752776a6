#pragma once

#include "qrf/linalg.hpp"

#include <string>

namespace qrf {

enum class SpaceKind { Kinematical, Subsystem, PairProduct, Physical, Reduced };

// Identifies the space an operator acts on. frame is the subsystem letter for
// Subsystem tags, and the reference frame for PairProduct/Reduced tags.
struct SpaceTag {
    SpaceKind kind = SpaceKind::Kinematical;
    char frame = 0;
    std::string sector;
    bool operator==(const SpaceTag&) const = default;
};

std::string to_string(const SpaceTag& t);

// Dense operator tagged with its space; composing across spaces is an error.
struct LabeledOperator {
    SpaceTag tag;
    ComplexMatrix mat;
};

LabeledOperator mul(const LabeledOperator& a, const LabeledOperator& b);
LabeledOperator add(const LabeledOperator& a, const LabeledOperator& b);
LabeledOperator commutator(const LabeledOperator& a, const LabeledOperator& b);
ComplexMatrix apply(const LabeledOperator& op, const ComplexMatrix& vec);

} // namespace qrf
