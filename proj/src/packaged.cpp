#include "qrf/analysis.hpp"

#include "qrf/errors.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

namespace qrf {

namespace {

// Two spin-1/2 systems against a two-sided two-level clock. The clock carries
// one +/- degeneracy sector per eigenvalue, mirroring the sign of a squared
// momentum.
const std::string kQutritToml = R"(# two qubits and a two-sided clock
[[subsystem]]
name = "A"
levels = [ { value = "-1/2", label = "0" }, { value = "1/2", label = "0" } ]

[[subsystem]]
name = "B"
levels = [ { value = "-1/2", label = "0" }, { value = "1/2", label = "0" } ]

[[subsystem]]
name = "C"
levels = [ { value = "0", label = "+" }, { value = "1", label = "+" }, { value = "0", label = "-" }, { value = "1", label = "-" } ]
)";

std::string make_translation_toml() {
    std::ostringstream out;
    out << "# three particles on a discrete line, total momentum conserved mod 8\n";
    out << "cyclic_modulus = 8\n";
    for (char name : {'A', 'B', 'C'}) {
        out << "\n[[subsystem]]\nname = \"" << name << "\"\nlevels = [";
        for (int p = 0; p < 8; ++p) out << (p ? ", " : " ") << "{ value = " << p << ", label = \"0\" }";
        out << " ]\n";
    }
    return out.str();
}

std::string make_windowed_toml() {
    std::ostringstream out;
    out << "# half-line spectra for A and B against a wide symmetric window on C\n";
    out << "orientation_group_size = 25\n";
    auto emit = [&](char name, int lo, int hi) {
        out << "\n[[subsystem]]\nname = \"" << name << "\"\nlevels = [";
        for (int v = lo; v <= hi; ++v)
            out << (v > lo ? ", " : " ") << "{ value = " << v << ", label = \"0\" }";
        out << " ]\n";
    };
    emit('A', 0, 3);
    emit('B', 0, 3);
    emit('C', -6, 6);
    return out.str();
}

// Wrapped squared distance on Z_8.
double wrapped_delta(long long p, long long center) {
    long long d = ((p - center) % 8 + 8) % 8;
    if (d > 4) d -= 8;
    return static_cast<double>(d);
}

double gauss_amp(long long p, long long center) {
    double d = wrapped_delta(p, center);
    return std::exp(-d * d / 4.0);
}

} // namespace

const std::string& packaged_model_toml(const std::string& name) {
    static const std::string translation = make_translation_toml();
    static const std::string windowed = make_windowed_toml();
    if (name == "qutrit") return kQutritToml;
    if (name == "translation") return translation;
    if (name == "windowed") return windowed;
    fail(ErrorKind::Validation, "unknown packaged model '" + name +
                                    "' (expected qutrit, translation or windowed)");
}

CompositeModel packaged_model(const std::string& name) {
    return load_model(packaged_model_toml(name));
}

bool is_packaged_packet(const std::string& name) {
    return name == "gauss" || name == "character";
}

// Frame-C coefficient maps on the translation model. The Gaussian packet is a
// product psi_A(p_A) psi_B(p_B) with centers 2 and 5; the character packet
// replaces psi_B by the multiplicative character e^{2 pi i 3 p / 8}.
std::map<CoeffKey, cplx> packaged_packet(const std::string& name) {
    if (!is_packaged_packet(name))
        fail(ErrorKind::Validation,
             "unknown packaged state '" + name + "' (expected gauss or character)");
    std::map<CoeffKey, cplx> coeffs;
    for (long long pa = 0; pa < 8; ++pa)
        for (long long pb = 0; pb < 8; ++pb) {
            cplx amp;
            if (name == "gauss") {
                amp = gauss_amp(pa, 2) * gauss_amp(pb, 5);
            } else {
                double phase = 2.0 * std::numbers::pi * 3.0 * static_cast<double>(pb) / 8.0;
                amp = gauss_amp(pa, 2) * std::polar(1.0, phase);
            }
            coeffs[CoeffKey{pa, "0", pb, "0"}] = amp;
        }
    return coeffs;
}

ordered_json packaged_packet_json(const std::string& name) {
    ordered_json doc;
    doc["frame"] = "C";
    doc["sector"] = "0";
    doc["coeffs"] = ordered_json::array();
    for (const auto& [key, value] : packaged_packet(name)) {
        ordered_json item;
        item["ci"] = key.ci;
        item["di"] = key.di;
        item["cj"] = key.cj;
        item["dj"] = key.dj;
        item["re"] = value.real();
        item["im"] = value.imag();
        doc["coeffs"].push_back(item);
    }
    return doc;
}

ComplexMatrix random_hermitian(std::mt19937_64& rng, long n) {
    std::normal_distribution<double> normal(0.0, 1.0);
    ComplexMatrix g(n, n);
    for (long r = 0; r < n; ++r)
        for (long c = 0; c < n; ++c) g.at(r, c) = cplx{normal(rng), normal(rng)};
    ComplexMatrix h = g + g.adjoint();
    h *= cplx{0.5, 0.0};
    return h;
}

PhysicalState random_physical_state(std::mt19937_64& rng, const PhysicalSpace& space) {
    std::normal_distribution<double> normal(0.0, 1.0);
    ComplexMatrix v(space.dim(), 1);
    for (long p = 0; p < space.dim(); ++p) v.at(p, 0) = cplx{normal(rng), normal(rng)};
    return PhysicalState{normalized(v), true};
}

ComplexMatrix random_sector_state(std::mt19937_64& rng, const PhysicalSpace& space, char k,
                                  const std::string& d_k) {
    std::normal_distribution<double> normal(0.0, 1.0);
    ComplexMatrix v(space.dim(), 1);
    for (long p : space.sector(k, d_k)) v.at(p, 0) = cplx{normal(rng), normal(rng)};
    return normalized(v);
}

} // namespace qrf
