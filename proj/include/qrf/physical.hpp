#pragma once

#include "qrf/model.hpp"

#include <compare>
#include <map>
#include <vector>

namespace qrf {

// Enumerated solution basis of the constraint, ordered lexicographically in
// (a, b, c) level indices, with per-frame superselection sector indexing.
struct PhysicalSpace {
    CompositeModel model;
    std::vector<KinIndex> basis;
    // (frame letter, degeneracy label) -> positions into basis, ascending
    std::map<std::pair<char, std::string>, std::vector<long>> sector_index;
    ComplexMatrix embedding; // kin_dim x dim(), isometric

    long dim() const { return static_cast<long>(basis.size()); }
    const std::vector<long>& sector(char k, const std::string& d_k) const;
    long basis_position(const KinIndex& x) const; // -1 when not physical
};

PhysicalSpace build_physical_space(const CompositeModel& model);

struct PhysicalState {
    ComplexMatrix amplitudes; // dim x 1 over the physical basis
    bool normalized = true;
};

struct CoeffKey {
    long long ci = 0;
    std::string di;
    long long cj = 0;
    std::string dj;
    auto operator<=>(const CoeffKey&) const = default;
};

// Builds the sector-d_k physical state with amplitude coeffs[(c_i,d_i,c_j,d_j)]
// on |-c_i-c_j, d_k> ⊗ |c_i,d_i> ⊗ |c_j,d_j>. Keys must satisfy
// c_i + c_j ∈ sigma_{ij|k}.
PhysicalState physical_state_from_coeffs(const PhysicalSpace& space, char k,
                                         const std::string& d_k,
                                         const std::map<CoeffKey, cplx>& coeffs,
                                         bool normalize = true);

// Parses a JSON array of {ci, di, cj, dj, re, im}.
std::map<CoeffKey, cplx> coeffs_from_json(const std::string& json_text);

// Diagonal projector on H_i ⊗ H_j keeping (c_i,d_i,c_j,d_j) with
// c_i + c_j ∈ sigma_{ij|k}; the matrix is the same for every sector d_k.
LabeledOperator projector(const CompositeModel& model, char k, const std::string& d_k);

// Brute-force factorization oracle: does the projector equal
// Pi_i(sigma_{i|jk}) ⊗ Pi_j(sigma_{j|ik}) exactly?
bool projector_factorizes(const CompositeModel& model, char k, const std::string& d_k);

// H_i ⊗ H_j helpers for frame k (i slow index).
long pair_dim(const CompositeModel& model, char k);
long pair_flat(const CompositeModel& model, char k, long i_idx, long j_idx);
// Pair indices kept by the projector, ascending.
std::vector<long> kept_pair_indices(const CompositeModel& model, char k);

} // namespace qrf
