#include "qrf/labeled.hpp"

#include "qrf/errors.hpp"

namespace qrf {

std::string to_string(const SpaceTag& t) {
    std::string s;
    switch (t.kind) {
    case SpaceKind::Kinematical: s = "kinematical"; break;
    case SpaceKind::Subsystem: s = "subsystem"; break;
    case SpaceKind::PairProduct: s = "pair-product"; break;
    case SpaceKind::Physical: s = "physical"; break;
    case SpaceKind::Reduced: s = "reduced"; break;
    }
    if (t.frame) s += std::string("(") + t.frame + ")";
    if (!t.sector.empty()) s += "[" + t.sector + "]";
    return s;
}

namespace {
void require_same_tag(const LabeledOperator& a, const LabeledOperator& b, const char* what) {
    if (!(a.tag == b.tag))
        fail(ErrorKind::Dimension, std::string("cannot ") + what + " operators on " +
                                       to_string(a.tag) + " and " + to_string(b.tag));
}
} // namespace

LabeledOperator mul(const LabeledOperator& a, const LabeledOperator& b) {
    require_same_tag(a, b, "multiply");
    return {a.tag, a.mat * b.mat};
}

LabeledOperator add(const LabeledOperator& a, const LabeledOperator& b) {
    require_same_tag(a, b, "add");
    return {a.tag, a.mat + b.mat};
}

LabeledOperator commutator(const LabeledOperator& a, const LabeledOperator& b) {
    require_same_tag(a, b, "commute");
    return {a.tag, a.mat * b.mat - b.mat * a.mat};
}

ComplexMatrix apply(const LabeledOperator& op, const ComplexMatrix& vec) {
    if (op.mat.cols() != vec.rows() || vec.cols() != 1)
        fail(ErrorKind::Dimension, "operator/vector shape mismatch on " + to_string(op.tag));
    return op.mat * vec;
}

} // namespace qrf
