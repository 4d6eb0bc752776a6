#pragma once

#include "qrf/physical.hpp"

#include <optional>

namespace qrf {

// Orientation angle of group element m, 2*pi*m / N_g.
double group_angle(const CompositeModel& model, long m);

// |g_m, d_k> = sum_{c_k with label d_k} e^{-i c_k g_m} |c_k, d_k>, unnormalized.
ComplexMatrix orientation_state(const CompositeModel& model, char k, const std::string& d_k,
                                long m);

// Covariant POVM effect on H_k: mu * sum_{d_k} |g_m,d_k><g_m,d_k|, mu = 1/N_g.
// The effects over all m resolve the identity exactly.
LabeledOperator povm_effect(const CompositeModel& model, char k, long m);

// n-th orientation moment sum_m povm_effect(g_m) * g_m^n.
LabeledOperator moment_operator(const CompositeModel& model, char k, int n);

// 0 when 0 ∈ -sigma_{ij|k}, otherwise the element of smallest absolute value
// (ties toward negative).
long long default_epsilon(const CompositeModel& model, char k);

// Conditional-shift unitary T = mu sum_{d_k,m} e^{i eps g} |g,d_k><g,d_k| ⊗
// e^{i(C_i+C_j)g} on the kinematical space. On a sector-d_k physical state it
// factors the frame out: T|psi> = |eps,d_k>_k ⊗ |psi_{ij|k}>.
LabeledOperator disentangler(const CompositeModel& model, char k, long long epsilon);
// Inverse of the disentangler on physical states.
LabeledOperator disentangler_inverse(const CompositeModel& model, char k, long long epsilon);

struct ReducedTag {
    long long ci = 0;
    std::string di;
    long long cj = 0;
    std::string dj;
};

// One frame's view of the physical space: the relational Heisenberg reduction
// onto the d_k sector and its inverse, as explicit rectangular matrices.
struct FramePerspective {
    char frame = 0;
    std::string sector;
    long long epsilon = 0;
    long orientation = 0; // group element used in the construction
    long reduced_dim = 0;
    ComplexMatrix reduce_matrix; // reduced_dim x phys_dim
    ComplexMatrix embed_matrix;  // phys_dim x reduced_dim
    std::vector<ReducedTag> reduced_basis_tags;
};

FramePerspective build_perspective(const PhysicalSpace& space, char k, const std::string& d_k,
                                   std::optional<long long> epsilon = std::nullopt, long m = 0);

struct SchrodingerReduction {
    ComplexMatrix vec; // on H_i ⊗ H_j
    bool sector_support = true;
};

// <g_m, d_k| ⊗ 1_ij applied to a physical state.
SchrodingerReduction reduce_schrodinger(const PhysicalSpace& space, const PhysicalState& psi,
                                        char k, const std::string& d_k, long m);

// Frame change from.frame -> to.frame on the sector overlap. Refuses when the
// embedded state leaks more than 1e-10 of its norm outside the target sector.
ComplexMatrix change_frame(const PhysicalSpace& space, const FramePerspective& from,
                           const FramePerspective& to, const ComplexMatrix& psi_reduced);
ComplexMatrix change_frame(const PhysicalSpace& space, char from_k, const std::string& from_d,
                           char to_k, const std::string& to_d, const ComplexMatrix& psi_reduced);

// Z_N position operator F diag(0..N-1) F† in the momentum label basis.
ComplexMatrix position_operator(long n);
// Momentum relabeling |p> -> |-p mod n>.
ComplexMatrix parity_relabel(long n);

// Permutes a kinematical vector so subsystem k becomes the slow index,
// giving the H_k ⊗ (H_i ⊗ H_j) order used for Schmidt splits against the frame.
ComplexMatrix permute_frame_front(const CompositeModel& model, char k,
                                  const ComplexMatrix& kin_vec);

} // namespace qrf
