#pragma once

#include "qrf/frames.hpp"

namespace qrf {

// Constraint-commuting encoding of "the value of f on i,j relative to frame
// k", built by discrete G-twirl of the unitarily conjugated observable.
struct RelationalObservable {
    char frame = 0;
    std::string sector;
    std::string source;
    LabeledOperator op; // kinematical space
    int sign = -1;      // orientation-conjugation convention that passed
    double defect = 0.0;
};

// f acts on H_i ⊗ H_j (i slow). The conjugation sign is resolved empirically:
// the convention with the smaller invariance defect wins, and neither passing
// 1e-10 signals a model or group-size bug.
RelationalObservable relational_observable(const PhysicalSpace& space, char k,
                                           const std::string& d_k, const ComplexMatrix& f,
                                           const std::string& source = "");

// max-norm of [F, C] restricted to physical states.
double dirac_defect(const PhysicalSpace& space, const ComplexMatrix& op);
double dirac_defect(const PhysicalSpace& space, const RelationalObservable& obs);

// Weak-homomorphism defect ||(F_[f,h] - [F_f, F_h]) * embedding||_max, with f
// and h first compressed onto the reduced pair space they act on.
double homomorphism_defect(const PhysicalSpace& space, char k, const std::string& d_k,
                           const ComplexMatrix& f, const ComplexMatrix& h);

// Pi (m_target ⊗ 1) Pi compressed onto the kept pair basis.
LabeledOperator projected_observable(const CompositeModel& model, char k, const std::string& d_k,
                                     char target, const ComplexMatrix& m);

// ||[A_{i|k}, A_{j|k}]||_max on the compressed pair space.
double theorem2_commutator_norm(const CompositeModel& model, char k, const std::string& d_k,
                                const ComplexMatrix& m_i, const ComplexMatrix& m_j);

struct Theorem2Witness {
    double max_norm = 0.0;
    long i_row = 0, i_col = 0; // matrix unit on the i side
    long j_row = 0, j_col = 0; // matrix unit on the j side
};

// Exhaustive search over elementary matrix-unit pairs.
Theorem2Witness theorem2_witness_search(const CompositeModel& model, char k,
                                        const std::string& d_k);

struct Theorem1Report {
    double cross_frame_norm = 0.0; // ||[F^{C|A}_f, C_A ⊗ 1 ⊗ 1] emb||, nonzero
    double same_frame_norm = 0.0;  // ||[F^{C|B}_f, F^{A|B}_{C_A}] emb||, zero
    bool success = false;
};

// Witness that C's relational algebra relative to A differs from the one
// relative to B. f must act on H_C and must not commute with C_C.
Theorem1Report theorem1_witness(const PhysicalSpace& space, const ComplexMatrix& f_on_c);

// Truncated nested-commutator series for the same observable; retained as a
// cross-check of the closed twirl form.
ComplexMatrix relational_observable_series(const CompositeModel& model, char k,
                                           const std::string& d_k, const ComplexMatrix& f,
                                           int order);

} // namespace qrf
