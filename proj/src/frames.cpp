#include "qrf/frames.hpp"

#include "qrf/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace qrf {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

void check_group_element(const CompositeModel& model, long m) {
    if (m < 0 || m >= model.orientation_group_size)
        fail(ErrorKind::Precondition,
             "group element " + std::to_string(m) + " outside {0.." +
                 std::to_string(model.orientation_group_size - 1) + "}");
}

void check_sector(const CompositeModel& model, char k, const std::string& d_k) {
    auto labels = model.subsystem(k).sector_labels();
    if (std::find(labels.begin(), labels.end(), d_k) == labels.end())
        fail(ErrorKind::Precondition, std::string("no sector \"") + d_k + "\" for frame " + k);
}

struct LegLayout {
    long dim_k = 0;
    long stride_k = 0;   // stride of the frame index in the flat kinematical index
    long dim_i = 0, dim_j = 0;
    long stride_i = 0, stride_j = 0;
};

LegLayout leg_layout(const CompositeModel& model, char k) {
    const long da = model.subsystems[0].dim();
    const long db = model.subsystems[1].dim();
    const long dc = model.subsystems[2].dim();
    LegLayout lay;
    switch (k) {
    case 'A':
        lay = {da, db * dc, db, dc, dc, 1};
        break;
    case 'B':
        lay = {db, dc, da, dc, db * dc, 1};
        break;
    case 'C':
        lay = {dc, 1, da, db, db * dc, dc};
        break;
    default:
        fail(ErrorKind::Precondition, std::string("unknown subsystem '") + k + "'");
    }
    return lay;
}

// The disentangler and its inverse are 0/1 matrices: the orientation average
// mu * sum_m e^{i Delta g_m} is exactly 1 when Delta ≡ 0 (mod N_g) and 0
// otherwise, because all eigenvalues are integers.
ComplexMatrix conditional_shift(const CompositeModel& model, char k, long long epsilon, int sign) {
    const LegLayout lay = leg_layout(model, k);
    const SubsystemSpec& sub = model.subsystem(k);
    auto [i, j] = model.complement(k);
    const SubsystemSpec& si = model.subsystem(i);
    const SubsystemSpec& sj = model.subsystem(j);
    const long kin = model.kin_dim();
    if (static_cast<long long>(kin) * kin > max_matrix_entries())
        fail(ErrorKind::Size, "kinematical operator exceeds the dimension guard");
    ComplexMatrix t(kin, kin);
    for (long ik = 0; ik < lay.dim_k; ++ik)
        for (long ii = 0; ii < lay.dim_i; ++ii)
            for (long ij = 0; ij < lay.dim_j; ++ij) {
                long col = ik * lay.stride_k + ii * lay.stride_i + ij * lay.stride_j;
                long long target = model.mod_group(
                    sub.levels[ik].value +
                    sign * (epsilon + si.levels[ii].value + sj.levels[ij].value));
                for (long ok = 0; ok < lay.dim_k; ++ok) {
                    if (sub.levels[ok].label != sub.levels[ik].label) continue;
                    if (model.mod_group(sub.levels[ok].value) != target) continue;
                    long row = ok * lay.stride_k + ii * lay.stride_i + ij * lay.stride_j;
                    t.at(row, col) = 1.0;
                }
            }
    return t;
}

} // namespace

double group_angle(const CompositeModel& model, long m) {
    return kTwoPi * static_cast<double>(m) / static_cast<double>(model.orientation_group_size);
}

ComplexMatrix orientation_state(const CompositeModel& model, char k, const std::string& d_k,
                                long m) {
    check_group_element(model, m);
    check_sector(model, k, d_k);
    const SubsystemSpec& sub = model.subsystem(k);
    const double g = group_angle(model, m);
    ComplexMatrix v(sub.dim(), 1);
    for (long idx = 0; idx < sub.dim(); ++idx)
        if (sub.levels[idx].label == d_k)
            v.at(idx, 0) = std::polar(1.0, -static_cast<double>(sub.levels[idx].value) * g);
    return v;
}

LabeledOperator povm_effect(const CompositeModel& model, char k, long m) {
    check_group_element(model, m);
    const SubsystemSpec& sub = model.subsystem(k);
    const double g = group_angle(model, m);
    const double mu = 1.0 / static_cast<double>(model.orientation_group_size);
    ComplexMatrix e(sub.dim(), sub.dim());
    for (long r = 0; r < sub.dim(); ++r)
        for (long c = 0; c < sub.dim(); ++c) {
            if (sub.levels[r].label != sub.levels[c].label) continue;
            double phase = -static_cast<double>(sub.levels[r].value - sub.levels[c].value) * g;
            e.at(r, c) = mu * std::polar(1.0, phase);
        }
    return {SpaceTag{SpaceKind::Subsystem, k}, std::move(e)};
}

LabeledOperator moment_operator(const CompositeModel& model, char k, int n) {
    if (n < 0) fail(ErrorKind::Precondition, "moment order must be nonnegative");
    const SubsystemSpec& sub = model.subsystem(k);
    ComplexMatrix acc(sub.dim(), sub.dim());
    for (long m = 0; m < model.orientation_group_size; ++m) {
        double w = std::pow(group_angle(model, m), n);
        ComplexMatrix e = povm_effect(model, k, m).mat;
        e *= cplx{w, 0.0};
        acc += e;
    }
    return {SpaceTag{SpaceKind::Subsystem, k}, std::move(acc)};
}

long long default_epsilon(const CompositeModel& model, char k) {
    IntSet sigma = sigma_double(model, k).values();
    if (sigma.empty())
        fail(ErrorKind::Precondition,
             std::string("sigma_{ij|") + k + "} is empty; no disentangler exists");
    long long best = 0;
    bool have = false;
    for (long long s : sigma) {
        long long eps = model.wrap_value(-s);
        if (!have || std::abs(eps) < std::abs(best) ||
            (std::abs(eps) == std::abs(best) && eps < best)) {
            best = eps;
            have = true;
        }
    }
    return best;
}

LabeledOperator disentangler(const CompositeModel& model, char k, long long epsilon) {
    IntSet sigma = sigma_double(model, k).values();
    if (!sigma.count(model.wrap_value(-epsilon)))
        fail(ErrorKind::Precondition, "-epsilon = " + std::to_string(-epsilon) +
                                          " is not in sigma_{ij|" + std::string(1, k) + "}");
    for (const std::string& d : model.subsystem(k).sector_labels())
        if (!model.subsystem(k).level_index(model.wrap_value(epsilon), d))
            fail(ErrorKind::Precondition,
                 std::string("sector \"") + d + "\" of frame " + k + " has no level at epsilon = " +
                     std::to_string(epsilon) + "; sectors would not stay distinguishable");
    return {SpaceTag{SpaceKind::Kinematical}, conditional_shift(model, k, epsilon, +1)};
}

LabeledOperator disentangler_inverse(const CompositeModel& model, char k, long long epsilon) {
    return {SpaceTag{SpaceKind::Kinematical}, conditional_shift(model, k, epsilon, -1)};
}

FramePerspective build_perspective(const PhysicalSpace& space, char k, const std::string& d_k,
                                   std::optional<long long> epsilon, long m) {
    const CompositeModel& model = space.model;
    check_sector(model, k, d_k);
    check_group_element(model, m);
    auto [i, j] = model.complement(k);
    const SubsystemSpec& si = model.subsystem(i);
    const SubsystemSpec& sj = model.subsystem(j);

    FramePerspective persp;
    persp.frame = k;
    persp.sector = d_k;
    persp.orientation = m;

    const std::vector<long>& sector = space.sector(k, d_k);
    persp.reduced_dim = static_cast<long>(sector.size());
    if (persp.reduced_dim == 0) {
        persp.reduce_matrix = ComplexMatrix(0, space.dim());
        persp.embed_matrix = ComplexMatrix(space.dim(), 0);
        return persp;
    }

    persp.epsilon = epsilon ? *epsilon : default_epsilon(model, k);
    const IntSet sigma = sigma_double(model, k).values();
    if (!sigma.count(model.wrap_value(-persp.epsilon)))
        fail(ErrorKind::Precondition, "-epsilon = " + std::to_string(-persp.epsilon) +
                                          " is not in sigma_{ij|" + std::string(1, k) + "}");
    if (!model.subsystem(k).level_index(model.wrap_value(persp.epsilon), d_k))
        fail(ErrorKind::Precondition, std::string("sector \"") + d_k + "\" of frame " + k +
                                          " has no level at epsilon = " +
                                          std::to_string(persp.epsilon));
    // The sector must host every conditional-spectrum value, else the
    // reduction is not invertible on it.
    for (long long s : sigma)
        if (!model.subsystem(k).level_index(model.wrap_value(-s), d_k))
            fail(ErrorKind::Precondition,
                 std::string("sector \"") + d_k + "\" of frame " + k +
                     " does not cover sigma_{ij|" + std::string(1, k) + "} (missing value " +
                     std::to_string(model.wrap_value(-s)) + ")");

    const LegLayout lay = leg_layout(model, k);
    for (long p : sector) {
        const KinIndex& x = space.basis[p];
        long li = (k == 'A') ? x.b : x.a;
        long lj = (k == 'C') ? x.b : x.c;
        persp.reduced_basis_tags.push_back(
            ReducedTag{si.levels[li].value, si.levels[li].label, sj.levels[lj].value,
                       sj.levels[lj].label});
    }

    // Relational Heisenberg reduction as the explicit composition
    //   row-restrict ∘ (<g_m,d_k| ⊗ 1_ij) ∘ N(g_m,eps) ∘ T_{k,eps} ∘ embedding.
    const ComplexMatrix t_emb = disentangler(model, k, persp.epsilon).mat * space.embedding;
    const double g = group_angle(model, m);
    const long dim_ij = lay.dim_i * lay.dim_j;
    ComplexMatrix bra(dim_ij, model.kin_dim());
    const SubsystemSpec& sub = model.subsystem(k);
    for (long ik = 0; ik < lay.dim_k; ++ik) {
        if (sub.levels[ik].label != d_k) continue;
        cplx phase = std::polar(1.0, +static_cast<double>(sub.levels[ik].value) * g);
        for (long ii = 0; ii < lay.dim_i; ++ii)
            for (long ij = 0; ij < lay.dim_j; ++ij)
                bra.at(ii * lay.dim_j + ij,
                       ik * lay.stride_k + ii * lay.stride_i + ij * lay.stride_j) = phase;
    }
    ComplexMatrix reduce_full = bra * t_emb;
    reduce_full *= std::polar(1.0, -static_cast<double>(persp.epsilon) * g);

    // Rows off the reduced tags must vanish; anything else is a model bug.
    std::vector<long> tag_rows;
    tag_rows.reserve(sector.size());
    for (long p : sector) {
        const KinIndex& x = space.basis[p];
        long li = (k == 'A') ? x.b : x.a;
        long lj = (k == 'C') ? x.b : x.c;
        tag_rows.push_back(li * lay.dim_j + lj);
    }
    persp.reduce_matrix = ComplexMatrix(persp.reduced_dim, space.dim());
    std::vector<char> is_tag_row(dim_ij, 0);
    for (long r : tag_rows) is_tag_row[r] = 1;
    for (long r = 0; r < dim_ij; ++r) {
        if (is_tag_row[r]) continue;
        for (long c = 0; c < space.dim(); ++c)
            if (std::abs(reduce_full.at(r, c)) > 1e-10)
                fail(ErrorKind::Precondition, "reduction leaked outside the reduced basis");
    }
    for (long t = 0; t < persp.reduced_dim; ++t)
        for (long c = 0; c < space.dim(); ++c)
            persp.reduce_matrix.at(t, c) = reduce_full.at(tag_rows[t], c);

    // Inverse: append |eps,d_k>_k, then undo the conditional shift.
    ComplexMatrix append(model.kin_dim(), dim_ij);
    long eps_idx = *model.subsystem(k).level_index(model.wrap_value(persp.epsilon), d_k);
    for (long ii = 0; ii < lay.dim_i; ++ii)
        for (long ij = 0; ij < lay.dim_j; ++ij)
            append.at(eps_idx * lay.stride_k + ii * lay.stride_i + ij * lay.stride_j,
                      ii * lay.dim_j + ij) = 1.0;
    ComplexMatrix embed_full =
        space.embedding.adjoint() * (disentangler_inverse(model, k, persp.epsilon).mat * append);
    persp.embed_matrix = ComplexMatrix(space.dim(), persp.reduced_dim);
    for (long c = 0; c < persp.reduced_dim; ++c)
        for (long r = 0; r < space.dim(); ++r)
            persp.embed_matrix.at(r, c) = embed_full.at(r, tag_rows[c]);

    ComplexMatrix round_trip = persp.reduce_matrix * persp.embed_matrix;
    if ((round_trip - ComplexMatrix::identity(persp.reduced_dim)).norm_max() > 1e-10)
        fail(ErrorKind::Precondition, "reduction is not invertible on the sector");
    return persp;
}

SchrodingerReduction reduce_schrodinger(const PhysicalSpace& space, const PhysicalState& psi,
                                        char k, const std::string& d_k, long m) {
    const CompositeModel& model = space.model;
    check_sector(model, k, d_k);
    check_group_element(model, m);
    if (psi.amplitudes.rows() != space.dim() || psi.amplitudes.cols() != 1)
        fail(ErrorKind::Dimension, "state does not live on this physical space");
    const LegLayout lay = leg_layout(model, k);
    const SubsystemSpec& sub = model.subsystem(k);
    const double g = group_angle(model, m);
    ComplexMatrix out(lay.dim_i * lay.dim_j, 1);
    double sector_norm2 = 0.0;
    for (long p : space.sector(k, d_k)) {
        const KinIndex& x = space.basis[p];
        long lk = (k == 'A') ? x.a : (k == 'B' ? x.b : x.c);
        long li = (k == 'A') ? x.b : x.a;
        long lj = (k == 'C') ? x.b : x.c;
        cplx amp = psi.amplitudes.at(p, 0);
        sector_norm2 += std::norm(amp);
        out.at(li * lay.dim_j + lj, 0) +=
            std::polar(1.0, +static_cast<double>(sub.levels[lk].value) * g) * amp;
    }
    SchrodingerReduction red;
    red.vec = std::move(out);
    red.sector_support = sector_norm2 > 1e-24;
    return red;
}

ComplexMatrix change_frame(const PhysicalSpace& space, const FramePerspective& from,
                           const FramePerspective& to, const ComplexMatrix& psi_reduced) {
    if (psi_reduced.cols() != 1 || psi_reduced.rows() != from.reduced_dim)
        fail(ErrorKind::Dimension, "reduced state does not match the source perspective");
    ComplexMatrix phys = from.embed_matrix * psi_reduced;
    double total = vec_norm(phys);
    if (total < 1e-300) fail(ErrorKind::Normalization, "cannot change frame of a zero state");
    double kept2 = 0.0;
    for (long p : space.sector(to.frame, to.sector)) kept2 += std::norm(phys.at(p, 0));
    double leaked = std::sqrt(std::max(0.0, total * total - kept2));
    if (leaked / total > 1e-10)
        fail(ErrorKind::Overlap,
             "state leaks norm " + std::to_string(leaked) + " outside the " +
                 std::string(1, to.frame) + "/\"" + to.sector + "\" sector overlap");
    return to.reduce_matrix * phys;
}

ComplexMatrix change_frame(const PhysicalSpace& space, char from_k, const std::string& from_d,
                           char to_k, const std::string& to_d, const ComplexMatrix& psi_reduced) {
    FramePerspective from = build_perspective(space, from_k, from_d);
    FramePerspective to = build_perspective(space, to_k, to_d);
    return change_frame(space, from, to, psi_reduced);
}

ComplexMatrix position_operator(long n) {
    if (n < 1) fail(ErrorKind::Precondition, "position operator needs n >= 1");
    ComplexMatrix q(n, n);
    for (long r = 0; r < n; ++r)
        for (long c = 0; c < n; ++c) {
            cplx s = 0.0;
            for (long x = 0; x < n; ++x)
                s += static_cast<double>(x) *
                     std::polar(1.0, kTwoPi * static_cast<double>(x * (r - c)) / n);
            q.at(r, c) = s / static_cast<double>(n);
        }
    return q;
}

ComplexMatrix parity_relabel(long n) {
    ComplexMatrix p(n, n);
    for (long i = 0; i < n; ++i) p.at(((n - i) % n), i) = 1.0;
    return p;
}

ComplexMatrix permute_frame_front(const CompositeModel& model, char k,
                                  const ComplexMatrix& kin_vec) {
    if (kin_vec.cols() != 1 || kin_vec.rows() != model.kin_dim())
        fail(ErrorKind::Dimension, "vector does not live on the kinematical space");
    const LegLayout lay = leg_layout(model, k);
    ComplexMatrix out(model.kin_dim(), 1);
    for (long ik = 0; ik < lay.dim_k; ++ik)
        for (long ii = 0; ii < lay.dim_i; ++ii)
            for (long ij = 0; ij < lay.dim_j; ++ij)
                out.at((ik * lay.dim_i + ii) * lay.dim_j + ij, 0) =
                    kin_vec.at(ik * lay.stride_k + ii * lay.stride_i + ij * lay.stride_j, 0);
    return out;
}

} // namespace qrf
