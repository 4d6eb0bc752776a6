#include "qrf/spectra.hpp"

#include "qrf/errors.hpp"
#include "qrf/model.hpp"

#include <algorithm>
#include <cstdlib>

namespace qrf {

IntSet SpectrumSet::values() const {
    IntSet out;
    for (const auto& [v, labels] : entries) out.insert(v);
    return out;
}

void SpectrumSet::insert(long long value, const std::string& label) {
    entries[value].insert(label);
}

bool SpectrumSet::contains(long long value) const { return entries.count(value) > 0; }

long long SpectrumSet::multiplicity(long long value) const {
    auto it = entries.find(value);
    return it == entries.end() ? 0 : static_cast<long long>(it->second.size());
}

long long SpectrumSet::total_multiplicity() const {
    long long n = 0;
    for (const auto& [v, labels] : entries) n += static_cast<long long>(labels.size());
    return n;
}

namespace {

long long reduce_mod(long long v, std::optional<long long> modulus) {
    if (!modulus) return v;
    long long n = *modulus;
    return ((v % n) + n) % n;
}

IntSet negate(const IntSet& s, std::optional<long long> modulus) {
    IntSet out;
    for (long long v : s) out.insert(reduce_mod(-v, modulus));
    return out;
}

IntSet intersect(const IntSet& a, const IntSet& b) {
    IntSet out;
    std::set_intersection(a.begin(), a.end(), b.begin(), b.end(),
                          std::inserter(out, out.begin()));
    return out;
}

} // namespace

IntSet minkowski_sum(const IntSet& x, const IntSet& y, std::optional<long long> modulus) {
    if (x.empty() || y.empty())
        fail(ErrorKind::Domain, "Minkowski sum of an empty set");
    IntSet out;
    for (long long a : x)
        for (long long b : y) out.insert(reduce_mod(a + b, modulus));
    return out;
}

SpectrumSet spectrum_of_sum(const SpectrumSet& a, const SpectrumSet& b,
                            std::optional<long long> modulus) {
    SpectrumSet out;
    for (const auto& [va, la] : a.entries)
        for (const auto& [vb, lb] : b.entries) {
            long long v = reduce_mod(va + vb, modulus);
            for (const auto& da : la)
                for (const auto& db : lb) out.insert(v, da + "," + db);
        }
    return out;
}

SpectrumSet sigma_double(const CompositeModel& model, char k) {
    auto [i, j] = model.complement(k);
    SpectrumSet sums = spectrum_of_sum(model.subsystem(i).spectrum(),
                                       model.subsystem(j).spectrum(), model.cyclic_modulus);
    IntSet allowed = negate(model.subsystem(k).spectrum().values(), model.cyclic_modulus);
    SpectrumSet out;
    for (const auto& [v, labels] : sums.entries)
        if (allowed.count(v))
            for (const auto& l : labels) out.insert(v, l);
    return out;
}

IntSet sigma_conditional(const CompositeModel& model, char i, std::pair<char, char> given) {
    auto norm = [](std::pair<char, char> p) {
        if (p.first > p.second) std::swap(p.first, p.second);
        return p;
    };
    auto expected = norm(model.complement(i));
    if (norm(given) != expected)
        fail(ErrorKind::Precondition, "conditioning subsystems must partition {A,B,C}");
    IntSet sums = minkowski_sum(model.subsystem(given.first).spectrum().values(),
                                model.subsystem(given.second).spectrum().values(),
                                model.cyclic_modulus);
    return intersect(model.subsystem(i).spectrum().values(), negate(sums, model.cyclic_modulus));
}

FactorizabilityReport check_factorizability(const CompositeModel& model, char k) {
    auto [i, j] = model.complement(k);
    FactorizabilityReport rep;
    rep.frame = k;
    rep.sigma_double = sigma_double(model, k);
    rep.sigma_i_cond = sigma_conditional(model, i, {j, k});
    rep.sigma_j_cond = sigma_conditional(model, j, {i, k});

    IntSet sigma_values = rep.sigma_double.values();
    if (rep.sigma_i_cond.empty() || rep.sigma_j_cond.empty()) {
        // zero-dimensional physical space: both sides are empty
        rep.holds = sigma_values.empty();
    } else {
        rep.minkowski = minkowski_sum(rep.sigma_i_cond, rep.sigma_j_cond, model.cyclic_modulus);
        rep.holds = (rep.minkowski == sigma_values);
    }

    if (!rep.holds) {
        IntSet sym_diff;
        for (long long v : sigma_values)
            if (!rep.minkowski.count(v)) sym_diff.insert(v);
        for (long long v : rep.minkowski)
            if (!sigma_values.count(v)) sym_diff.insert(v);
        long long best = 0;
        bool have = false;
        for (long long v : sym_diff) {
            if (!have || std::abs(v) < std::abs(best) || (std::abs(v) == std::abs(best) && v < best)) {
                best = v;
                have = true;
            }
        }
        if (have) rep.counterexample = best;
    }
    return rep;
}

} // namespace qrf
