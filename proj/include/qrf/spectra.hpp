#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>

namespace qrf {

struct CompositeModel;

using IntSet = std::set<long long>;

// Multiset of integer eigenvalues with their degeneracy labels; the spectral
// fingerprint of one constraint generator. Values are deduplicated, labels
// are a set per value.
struct SpectrumSet {
    std::map<long long, std::set<std::string>> entries;

    IntSet values() const;
    void insert(long long value, const std::string& label);
    bool contains(long long value) const;
    long long multiplicity(long long value) const; // number of labels at value
    long long total_multiplicity() const;
    bool empty() const { return entries.empty(); }
};

// Exact set of pairwise sums, reduced mod modulus when given.
IntSet minkowski_sum(const IntSet& x, const IntSet& y,
                     std::optional<long long> modulus = std::nullopt);

// Spectrum of a sum of commuting generators; each sum value carries the set
// of contributing label pairs, encoded "label_a,label_b".
SpectrumSet spectrum_of_sum(const SpectrumSet& a, const SpectrumSet& b,
                            std::optional<long long> modulus = std::nullopt);

// sigma_{ij|k} = spec(C_i + C_j) ∩ spec(-C_k), where i, j are the two
// subsystems other than k.
SpectrumSet sigma_double(const CompositeModel& model, char k);

// sigma_{i|jk} = sigma_i ∩ spec(-C_j - C_k).
IntSet sigma_conditional(const CompositeModel& model, char i, std::pair<char, char> given);

struct FactorizabilityReport {
    char frame = 0;
    SpectrumSet sigma_double;
    IntSet sigma_i_cond;
    IntSet sigma_j_cond;
    IntSet minkowski;
    bool holds = false;
    // Present iff holds is false: smallest-|value| element of the symmetric
    // difference between sigma_double's values and the Minkowski sum, ties
    // broken toward negative.
    std::optional<long long> counterexample;
};

// Tests sigma_{ij|k} == M(sigma_{i|jk}, sigma_{j|ik}).
FactorizabilityReport check_factorizability(const CompositeModel& model, char k);

} // namespace qrf
