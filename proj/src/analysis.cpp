#include "qrf/analysis.hpp"

#include "qrf/errors.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace qrf {

namespace {

struct NativeSplit {
    std::vector<std::pair<long long, std::string>> kept_i;
    std::vector<std::pair<long long, std::string>> kept_j;
};

NativeSplit native_split(const CompositeModel& model, char k) {
    auto [i, j] = model.complement(k);
    const IntSet cond_i = sigma_conditional(model, i, {j, k});
    const IntSet cond_j = sigma_conditional(model, j, {i, k});
    NativeSplit split;
    for (const Level& l : model.subsystem(i).levels)
        if (cond_i.count(l.value)) split.kept_i.emplace_back(l.value, l.label);
    for (const Level& l : model.subsystem(j).levels)
        if (cond_j.count(l.value)) split.kept_j.emplace_back(l.value, l.label);
    return split;
}

} // namespace

EntanglementData native_entanglement(const PhysicalSpace& space, const FramePerspective& persp,
                                     const ComplexMatrix& psi_reduced) {
    const CompositeModel& model = space.model;
    FactorizabilityReport rep = check_factorizability(model, persp.frame);
    if (!rep.holds)
        fail(ErrorKind::Precondition,
             std::string("the reduced space of frame ") + persp.frame +
                 " carries no native tensor factorization; transport one from a frame "
                 "where the Minkowski condition holds");
    if (psi_reduced.cols() != 1 || psi_reduced.rows() != persp.reduced_dim)
        fail(ErrorKind::Dimension, "reduced state does not match the perspective");

    NativeSplit split = native_split(model, persp.frame);
    const long nl = static_cast<long>(split.kept_i.size());
    const long nr = static_cast<long>(split.kept_j.size());
    if (nl * nr != persp.reduced_dim)
        fail(ErrorKind::Precondition, "reduced basis does not enumerate the kept product");

    std::map<std::pair<long long, std::string>, long> idx_i, idx_j;
    for (long t = 0; t < nl; ++t) idx_i[split.kept_i[t]] = t;
    for (long t = 0; t < nr; ++t) idx_j[split.kept_j[t]] = t;

    ComplexMatrix v(nl * nr, 1);
    for (long t = 0; t < persp.reduced_dim; ++t) {
        const ReducedTag& tag = persp.reduced_basis_tags[t];
        long li = idx_i.at({tag.ci, tag.di});
        long lj = idx_j.at({tag.cj, tag.dj});
        v.at(li * nr + lj, 0) = psi_reduced.at(t, 0);
    }
    double norm = vec_norm(v);
    if (norm < 1e-12)
        fail(ErrorKind::Precondition, "state has no support in this sector");
    v *= cplx{1.0 / norm, 0.0};

    EntanglementData out;
    out.shape = BipartitionShape{nl, nr};
    out.schmidt = schmidt_coefficients(v, out.shape);
    out.entropy = entropy_from_schmidt(out.schmidt);
    return out;
}

double transported_entanglement(const PhysicalSpace& space, const FramePerspective& from,
                                const FramePerspective& to, const PhysicalState& psi) {
    if (psi.amplitudes.rows() != space.dim())
        fail(ErrorKind::Dimension, "state does not live on this physical space");
    ComplexMatrix target_reduced = to.reduce_matrix * psi.amplitudes;
    double norm = vec_norm(target_reduced);
    if (norm < 1e-12)
        fail(ErrorKind::Precondition, "state has no support in the target sector");
    target_reduced *= cplx{1.0 / norm, 0.0};
    // Pull the target state back through the frame-change map and evaluate it
    // across the source frame's native split.
    ComplexMatrix back = change_frame(space, to, from, target_reduced);
    return native_entanglement(space, from, back).entropy;
}

ordered_json assertion_to_json(const Assertion& a) {
    ordered_json j;
    j["name"] = a.name;
    j["pass"] = a.pass;
    j["value"] = a.value;
    j["tolerance"] = a.tolerance;
    return j;
}

ordered_json compare_frames(const PhysicalSpace& space, const PhysicalState& psi,
                            const std::string& model_id, const std::string& state_id) {
    const CompositeModel& model = space.model;
    ordered_json report;
    report["model_id"] = model_id;
    report["state_id"] = state_id;
    report["frames"] = ordered_json::array();
    report["transported"] = ordered_json::array();

    std::map<char, bool> holds;
    for (char k : {'A', 'B', 'C'}) {
        FactorizabilityReport rep = check_factorizability(model, k);
        holds[k] = rep.holds;
        for (const std::string& sector : model.subsystem(k).sector_labels()) {
            ordered_json entry;
            entry["frame"] = std::string(1, k);
            entry["sector"] = sector;
            entry["factorizable"] = rep.holds;
            if (rep.holds) {
                try {
                    FramePerspective persp = build_perspective(space, k, sector);
                    ComplexMatrix red = persp.reduce_matrix * psi.amplitudes;
                    if (vec_norm(red) < 1e-12) {
                        entry["support"] = false;
                    } else {
                        entry["support"] = true;
                        EntanglementData ent = native_entanglement(space, persp, normalized(red));
                        entry["shape"] = {ent.shape.dim_left, ent.shape.dim_right};
                        entry["entropy"] = ent.entropy;
                        entry["schmidt"] = ent.schmidt;
                    }
                } catch (const Error& e) {
                    entry["error"] = e.what();
                }
            }
            report["frames"].push_back(entry);
        }
    }

    for (char from : {'A', 'B', 'C'}) {
        if (!holds[from]) continue;
        for (char to : {'A', 'B', 'C'}) {
            if (to == from) continue;
            ordered_json entry;
            const std::string from_sector = model.subsystem(from).sector_labels().front();
            const std::string to_sector = model.subsystem(to).sector_labels().front();
            entry["from"] = std::string(1, from);
            entry["from_sector"] = from_sector;
            entry["to"] = std::string(1, to);
            entry["to_sector"] = to_sector;
            try {
                FramePerspective pfrom = build_perspective(space, from, from_sector);
                FramePerspective pto = build_perspective(space, to, to_sector);
                entry["entropy"] = transported_entanglement(space, pfrom, pto, psi);
            } catch (const Error& e) {
                entry["error"] = e.what();
            }
            report["transported"].push_back(entry);
        }
    }
    return report;
}

namespace {

ExampleResult example_qutrit() {
    ExampleResult result;
    CompositeModel model = packaged_model("qutrit");
    PhysicalSpace space = build_physical_space(model);
    ordered_json& rep = result.report;
    rep["model_id"] = "packaged:qutrit";
    rep["scale"] = model.scale;
    rep["kinematical_dim"] = model.kin_dim();
    rep["physical_dim"] = space.dim();

    auto push = [&](const std::string& name, bool pass, double value, double tol) {
        result.assertions.push_back(Assertion{name, pass, value, tol});
    };

    // Clock-sector reduced spaces and the physical Hamiltonian Pi (C_A+C_B) Pi.
    ordered_json sectors = ordered_json::array();
    ComplexMatrix first_h;
    for (const std::string& sector : model.subsystem('C').sector_labels()) {
        FramePerspective persp = build_perspective(space, 'C', sector);
        ordered_json entry;
        entry["sector"] = sector;
        entry["reduced_dim"] = persp.reduced_dim;
        push("sector_" + sector + "_dim_is_3", persp.reduced_dim == 3,
             static_cast<double>(persp.reduced_dim), 0.0);

        auto diag_of = [&](char s) {
            const SubsystemSpec& sub = model.subsystem(s);
            std::vector<cplx> d(sub.dim());
            for (long idx = 0; idx < sub.dim(); ++idx)
                d[idx] = static_cast<double>(sub.levels[idx].value);
            return ComplexMatrix::diagonal(d);
        };
        LabeledOperator h = add(projected_observable(model, 'C', sector, 'A', diag_of('A')),
                                projected_observable(model, 'C', sector, 'B', diag_of('B')));
        if (first_h.empty())
            first_h = h.mat;
        else
            push("hamiltonian_sector_independent", (first_h - h.mat).norm_max() == 0.0,
                 (first_h - h.mat).norm_max(), 0.0);
        HermEig eig = herm_eig(h.mat);
        std::vector<double> rescaled;
        for (double ev : eig.eigenvalues) rescaled.push_back(ev / static_cast<double>(model.scale));
        entry["hamiltonian_eigenvalues"] = rescaled;
        const std::vector<double> expected{-1.0, 0.0, 0.0};
        for (size_t idx = 0; idx < expected.size(); ++idx) {
            double got = idx < rescaled.size() ? rescaled[idx] : 1e9;
            push("sector_" + sector + "_eigenvalue_" + std::to_string(idx),
                 std::abs(got - expected[idx]) <= 1e-12, got, 1e-12);
        }
        sectors.push_back(entry);
    }
    rep["clock_sectors"] = sectors;

    // No subsets of sigma_A, sigma_B reproduce sigma_{AB|C}: the pair evolves
    // as a single qutrit, not as two qubits.
    FactorizabilityReport fac = check_factorizability(model, 'C');
    bool oracle = projector_factorizes(model, 'C', "+");
    rep["frame_C_factorizable"] = fac.holds;
    push("frame_C_not_factorizable", !fac.holds && !oracle, fac.holds ? 1.0 : 0.0, 0.0);

    result.all_passed = std::all_of(result.assertions.begin(), result.assertions.end(),
                                    [](const Assertion& a) { return a.pass; });
    return result;
}

ExampleResult example_translation() {
    ExampleResult result;
    CompositeModel model = packaged_model("translation");
    PhysicalSpace space = build_physical_space(model);
    ordered_json& rep = result.report;
    rep["model_id"] = "packaged:translation";
    rep["physical_dim"] = space.dim();

    auto push = [&](const std::string& name, bool pass, double value, double tol) {
        result.assertions.push_back(Assertion{name, pass, value, tol});
    };

    FramePerspective persp_c = build_perspective(space, 'C', "0");
    FramePerspective persp_b = build_perspective(space, 'B', "0");

    PhysicalState gauss = physical_state_from_coeffs(space, 'C', "0", packaged_packet("gauss"));
    PhysicalState character =
        physical_state_from_coeffs(space, 'C', "0", packaged_packet("character"));

    auto native_entropy = [&](const FramePerspective& persp, const PhysicalState& state) {
        ComplexMatrix red = normalized(persp.reduce_matrix * state.amplitudes);
        return native_entanglement(space, persp, red).entropy;
    };

    double gauss_c = native_entropy(persp_c, gauss);
    double gauss_b = native_entropy(persp_b, gauss);
    double char_c = native_entropy(persp_c, character);
    double char_b = native_entropy(persp_b, character);
    double transported = transported_entanglement(space, persp_c, persp_b, gauss);

    rep["gauss"] = {{"native_entropy_C", gauss_c},
                    {"native_entropy_B", gauss_b},
                    {"transported_C_to_B", transported}};
    rep["character"] = {{"native_entropy_C", char_c}, {"native_entropy_B", char_b}};

    push("gauss_product_in_C", gauss_c <= 1e-10, gauss_c, 1e-10);
    push("gauss_entangled_in_B", gauss_b >= 0.1, gauss_b, 0.1);
    push("character_product_in_C", char_c <= 1e-10, char_c, 1e-10);
    push("character_product_in_B", char_b <= 1e-10, char_b, 1e-10);
    push("transport_preserves_entropy", std::abs(transported - gauss_c) <= 1e-10,
         std::abs(transported - gauss_c), 1e-10);

    result.all_passed = std::all_of(result.assertions.begin(), result.assertions.end(),
                                    [](const Assertion& a) { return a.pass; });
    return result;
}

ExampleResult example_windowed(std::uint64_t seed) {
    ExampleResult result;
    CompositeModel model = packaged_model("windowed");
    PhysicalSpace space = build_physical_space(model);
    ordered_json& rep = result.report;
    rep["model_id"] = "packaged:windowed";
    rep["physical_dim"] = space.dim();

    auto push = [&](const std::string& name, bool pass, double value, double tol) {
        result.assertions.push_back(Assertion{name, pass, value, tol});
    };

    ordered_json frames = ordered_json::array();
    for (char k : {'A', 'B', 'C'}) {
        FactorizabilityReport fac = check_factorizability(model, k);
        bool oracle = projector_factorizes(model, k, "0");
        ordered_json entry;
        entry["frame"] = std::string(1, k);
        entry["holds"] = fac.holds;
        entry["projector_factorizes"] = oracle;
        if (fac.counterexample) entry["counterexample"] = *fac.counterexample;
        frames.push_back(entry);
        push(std::string("oracle_agrees_") + k, fac.holds == oracle, fac.holds == oracle ? 1 : 0,
             0.0);
    }
    rep["frames"] = frames;
    push("holds_frame_C", check_factorizability(model, 'C').holds, 1.0, 0.0);
    push("fails_frame_B", !check_factorizability(model, 'B').holds, 0.0, 0.0);

    Theorem2Witness witness = theorem2_witness_search(model, 'B', "0");
    rep["theorem2_frame_B_witness"] = {{"max_commutator", witness.max_norm},
                                       {"i_unit", {witness.i_row, witness.i_col}},
                                       {"j_unit", {witness.j_row, witness.j_col}}};
    push("theorem2_frame_B_noncommuting", witness.max_norm >= 1e-2, witness.max_norm, 1e-2);

    std::mt19937_64 rng(seed);
    double worst = 0.0;
    for (int trial = 0; trial < 50; ++trial) {
        ComplexMatrix mi = random_hermitian(rng, model.subsystem('A').dim());
        ComplexMatrix mj = random_hermitian(rng, model.subsystem('B').dim());
        worst = std::max(worst, theorem2_commutator_norm(model, 'C', "0", mi, mj));
    }
    rep["theorem2_frame_C_max_commutator"] = worst;
    push("theorem2_frame_C_commuting", worst <= 1e-12, worst, 1e-12);

    result.all_passed = std::all_of(result.assertions.begin(), result.assertions.end(),
                                    [](const Assertion& a) { return a.pass; });
    return result;
}

} // namespace

ExampleResult run_example(const std::string& name, std::uint64_t seed) {
    ExampleResult result;
    if (name == "qutrit")
        result = example_qutrit();
    else if (name == "translation")
        result = example_translation();
    else if (name == "windowed")
        result = example_windowed(seed);
    else
        fail(ErrorKind::Validation, "unknown example '" + name +
                                        "' (expected qutrit, translation or windowed)");
    result.report["seed"] = seed;
    ordered_json asserts = ordered_json::array();
    for (const Assertion& a : result.assertions) asserts.push_back(assertion_to_json(a));
    result.report["assertions"] = asserts;
    return result;
}

} // namespace qrf
