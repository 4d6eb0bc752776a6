#include "qrf/physical.hpp"

#include "qrf/errors.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>

namespace qrf {

namespace {

// Level index on the frame subsystem and on the pair (i, j) for one triple.
long frame_level(const CompositeModel& m, char k, const KinIndex& x) {
    switch (k) {
    case 'A': return x.a;
    case 'B': return x.b;
    default: return x.c;
    }
}

long pair_index_of(const CompositeModel& m, char k, const KinIndex& x) {
    switch (k) {
    case 'A': return x.b * m.subsystems[2].dim() + x.c;
    case 'B': return x.a * m.subsystems[2].dim() + x.c;
    default: return x.a * m.subsystems[1].dim() + x.b;
    }
}

} // namespace

const std::vector<long>& PhysicalSpace::sector(char k, const std::string& d_k) const {
    auto it = sector_index.find({k, d_k});
    if (it == sector_index.end())
        fail(ErrorKind::Precondition,
             std::string("no sector \"") + d_k + "\" for frame " + k);
    return it->second;
}

long PhysicalSpace::basis_position(const KinIndex& x) const {
    auto it = std::lower_bound(basis.begin(), basis.end(), x,
                               [this](const KinIndex& u, const KinIndex& v) {
                                   return model.flat_index(u) < model.flat_index(v);
                               });
    if (it == basis.end() || !(*it == x)) return -1;
    return static_cast<long>(it - basis.begin());
}

PhysicalSpace build_physical_space(const CompositeModel& model) {
    PhysicalSpace space;
    space.model = model;
    for (long f = 0; f < model.kin_dim(); ++f) {
        KinIndex x = model.unflatten(f);
        if (model.constraint_value(x) == 0) space.basis.push_back(x);
    }
    const long n = static_cast<long>(space.basis.size());
    space.embedding = ComplexMatrix(model.kin_dim(), n);
    for (long p = 0; p < n; ++p) space.embedding.at(model.flat_index(space.basis[p]), p) = 1.0;
    for (char k : {'A', 'B', 'C'}) {
        const SubsystemSpec& sub = model.subsystem(k);
        for (const std::string& label : sub.sector_labels())
            space.sector_index[{k, label}] = {};
        for (long p = 0; p < n; ++p) {
            const std::string& label = sub.levels[frame_level(model, k, space.basis[p])].label;
            space.sector_index[{k, label}].push_back(p);
        }
    }
    return space;
}

PhysicalState physical_state_from_coeffs(const PhysicalSpace& space, char k,
                                         const std::string& d_k,
                                         const std::map<CoeffKey, cplx>& coeffs, bool normalize) {
    const CompositeModel& m = space.model;
    auto [i, j] = m.complement(k);
    const IntSet sigma = sigma_double(m, k).values();
    ComplexMatrix amps(space.dim(), 1);

    for (const auto& [key, value] : coeffs) {
        long long s = m.wrap_value(key.ci + key.cj);
        if (!sigma.count(s))
            fail(ErrorKind::Constraint,
                 "coefficient at (c_i=" + std::to_string(key.ci) + ", c_j=" +
                     std::to_string(key.cj) + ") has c_i+c_j outside sigma_{ij|" + k + "}");
        auto i_idx = m.subsystem(i).level_index(key.ci, key.di);
        if (!i_idx)
            fail(ErrorKind::Validation, std::string("subsystem ") + i + " has no level (value " +
                                            std::to_string(key.ci) + ", label \"" + key.di + "\")");
        auto j_idx = m.subsystem(j).level_index(key.cj, key.dj);
        if (!j_idx)
            fail(ErrorKind::Validation, std::string("subsystem ") + j + " has no level (value " +
                                            std::to_string(key.cj) + ", label \"" + key.dj + "\")");
        auto k_idx = m.subsystem(k).level_index(m.wrap_value(-s), d_k);
        if (!k_idx)
            fail(ErrorKind::Constraint, std::string("sector \"") + d_k + "\" of frame " + k +
                                            " has no level at value " +
                                            std::to_string(m.wrap_value(-s)));
        KinIndex x;
        switch (k) {
        case 'A': x = {*k_idx, *i_idx, *j_idx}; break;
        case 'B': x = {*i_idx, *k_idx, *j_idx}; break;
        default: x = {*i_idx, *j_idx, *k_idx}; break;
        }
        long pos = space.basis_position(x);
        if (pos < 0) fail(ErrorKind::Constraint, "coefficient does not solve the constraint");
        amps.at(pos, 0) += value;
    }

    PhysicalState state;
    if (normalize) {
        state.amplitudes = normalized(amps);
        state.normalized = true;
    } else {
        state.amplitudes = std::move(amps);
        state.normalized = false;
    }
    return state;
}

std::map<CoeffKey, cplx> coeffs_from_json(const std::string& json_text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(json_text);
    } catch (const nlohmann::json::exception& e) {
        fail(ErrorKind::Validation, std::string("bad coefficient JSON: ") + e.what());
    }
    const nlohmann::json* arr = &doc;
    if (doc.is_object() && doc.contains("coeffs")) arr = &doc["coeffs"];
    if (!arr->is_array()) fail(ErrorKind::Validation, "coefficient JSON must be an array");
    std::map<CoeffKey, cplx> out;
    for (const auto& item : *arr) {
        if (!item.is_object() || !item.contains("ci") || !item.contains("di") ||
            !item.contains("cj") || !item.contains("dj") || !item.contains("re") ||
            !item.contains("im"))
            fail(ErrorKind::Validation,
                 "each coefficient needs keys ci, di, cj, dj, re, im");
        CoeffKey key{item["ci"].get<long long>(), item["di"].get<std::string>(),
                     item["cj"].get<long long>(), item["dj"].get<std::string>()};
        out[key] += cplx{item["re"].get<double>(), item["im"].get<double>()};
    }
    return out;
}

LabeledOperator projector(const CompositeModel& model, char k, const std::string& d_k) {
    const SubsystemSpec& sub = model.subsystem(k);
    auto labels = sub.sector_labels();
    if (std::find(labels.begin(), labels.end(), d_k) == labels.end())
        fail(ErrorKind::Precondition, std::string("no sector \"") + d_k + "\" for frame " + k);
    ComplexMatrix pi(pair_dim(model, k), pair_dim(model, k));
    for (long idx : kept_pair_indices(model, k)) pi.at(idx, idx) = 1.0;
    return {SpaceTag{SpaceKind::PairProduct, k}, std::move(pi)};
}

bool projector_factorizes(const CompositeModel& model, char k, const std::string& d_k) {
    auto [i, j] = model.complement(k);
    const IntSet cond_i = sigma_conditional(model, i, {j, k});
    const IntSet cond_j = sigma_conditional(model, j, {i, k});
    auto side_projector = [&](char s, const IntSet& keep) {
        const SubsystemSpec& sub = model.subsystem(s);
        ComplexMatrix p(sub.dim(), sub.dim());
        for (long idx = 0; idx < sub.dim(); ++idx)
            if (keep.count(sub.levels[idx].value)) p.at(idx, idx) = 1.0;
        return p;
    };
    ComplexMatrix candidate = tensor_product(side_projector(i, cond_i), side_projector(j, cond_j));
    ComplexMatrix pi = projector(model, k, d_k).mat;
    for (long r = 0; r < pi.rows(); ++r)
        for (long c = 0; c < pi.cols(); ++c)
            if (pi.at(r, c) != candidate.at(r, c)) return false;
    return true;
}

long pair_dim(const CompositeModel& model, char k) {
    auto [i, j] = model.complement(k);
    return model.subsystem(i).dim() * model.subsystem(j).dim();
}

long pair_flat(const CompositeModel& model, char k, long i_idx, long j_idx) {
    auto [i, j] = model.complement(k);
    (void)i;
    return i_idx * model.subsystem(j).dim() + j_idx;
}

std::vector<long> kept_pair_indices(const CompositeModel& model, char k) {
    auto [i, j] = model.complement(k);
    const IntSet sigma = sigma_double(model, k).values();
    const SubsystemSpec& si = model.subsystem(i);
    const SubsystemSpec& sj = model.subsystem(j);
    std::vector<long> kept;
    for (long a = 0; a < si.dim(); ++a)
        for (long b = 0; b < sj.dim(); ++b)
            if (sigma.count(model.wrap_value(si.levels[a].value + sj.levels[b].value)))
                kept.push_back(a * sj.dim() + b);
    return kept;
}

} // namespace qrf
