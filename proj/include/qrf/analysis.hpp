#pragma once

#include "qrf/relobs.hpp"

#include <nlohmann/json.hpp>

#include <cstdint>
#include <random>

namespace qrf {

using ordered_json = nlohmann::ordered_json;

struct EntanglementData {
    BipartitionShape shape;
    std::vector<double> schmidt;
    double entropy = 0.0;
};

// Schmidt data across the native i|j split of the reduced space. Only valid
// when the Minkowski condition holds for the perspective's frame.
EntanglementData native_entanglement(const PhysicalSpace& space, const FramePerspective& persp,
                                     const ComplexMatrix& psi_reduced);

// Entropy of the target-frame reduced state across the image of the source
// frame's native split under the frame-change map. Agrees with the source
// native entropy up to roundoff.
double transported_entanglement(const PhysicalSpace& space, const FramePerspective& from,
                                const FramePerspective& to, const PhysicalState& psi);

struct Assertion {
    std::string name;
    bool pass = false;
    double value = 0.0;
    double tolerance = 0.0;
};
ordered_json assertion_to_json(const Assertion& a);

// Per-frame and transported entanglement entries for one physical state.
ordered_json compare_frames(const PhysicalSpace& space, const PhysicalState& psi,
                            const std::string& model_id, const std::string& state_id);

struct ExampleResult {
    ordered_json report;
    std::vector<Assertion> assertions;
    bool all_passed = false;
};

// name ∈ {qutrit, translation, windowed}
ExampleResult run_example(const std::string& name, std::uint64_t seed);

// Packaged models and states used by the worked examples and the CLI.
const std::string& packaged_model_toml(const std::string& name);
CompositeModel packaged_model(const std::string& name);
bool is_packaged_packet(const std::string& name); // gauss | character
std::map<CoeffKey, cplx> packaged_packet(const std::string& name);
ordered_json packaged_packet_json(const std::string& name);

// Shared randomized-suite helpers (deterministic given the engine state).
ComplexMatrix random_hermitian(std::mt19937_64& rng, long n);
PhysicalState random_physical_state(std::mt19937_64& rng, const PhysicalSpace& space);
ComplexMatrix random_sector_state(std::mt19937_64& rng, const PhysicalSpace& space, char k,
                                  const std::string& d_k);

} // namespace qrf
