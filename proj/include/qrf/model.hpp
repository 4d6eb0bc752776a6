#pragma once

#include "qrf/labeled.hpp"
#include "qrf/spectra.hpp"

#include <array>
#include <optional>
#include <string>
#include <vector>

namespace qrf {

struct Level {
    long long value = 0;   // integer eigenvalue after denominator clearing
    std::string label;     // degeneracy label
};

struct SubsystemSpec {
    char name = 0;
    std::vector<Level> levels; // eigenbasis order; (value,label) pairs unique

    long dim() const { return static_cast<long>(levels.size()); }
    SpectrumSet spectrum() const;
    std::vector<std::string> sector_labels() const; // distinct labels, file order
    std::optional<long> level_index(long long value, const std::string& label) const;
};

// Per-subsystem level indices; bijective with the flat kinematical index via
// mixed-radix encoding with A slowest.
struct KinIndex {
    long a = 0, b = 0, c = 0;
    bool operator==(const KinIndex&) const = default;
};

struct CompositeModel {
    std::array<SubsystemSpec, 3> subsystems; // fixed order A, B, C
    long long scale = 1;                     // denominator-clearing factor
    std::optional<long long> cyclic_modulus; // Z_N translation models
    long long orientation_group_size = 1;    // N_g

    const SubsystemSpec& subsystem(char name) const;
    long kin_dim() const;
    long flat_index(const KinIndex& x) const;
    KinIndex unflatten(long flat) const;

    // The two subsystems other than k, in alphabetical order (i, j).
    std::pair<char, char> complement(char k) const;

    // Representative of v in the stored eigenvalue convention: mod N for
    // cyclic models, v itself otherwise.
    long long wrap_value(long long v) const;

    // Representative of v in {0 .. N_g-1}; all orientation-group phase
    // arithmetic is exact under this reduction.
    long long mod_group(long long v) const;

    long long constraint_value(const KinIndex& x) const;
};

// Parses and validates the TOML model file format.
CompositeModel load_model(const std::string& text);
CompositeModel load_model_file(const std::string& path);

// Canonical serialization; load_model(to_toml(m)) reproduces m.
std::string to_toml(const CompositeModel& model);

// Diagonal constraint operator c_A + c_B + c_C on the kinematical space.
LabeledOperator constraint_operator(const CompositeModel& model);

// Identity-padded embedding of m acting on the target subsystem, A⊗B⊗C order.
LabeledOperator local_operator(const CompositeModel& model, char target, const ComplexMatrix& m);

} // namespace qrf
