#include "qrf/relobs.hpp"

#include "qrf/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace qrf {

namespace {

struct PairLayout {
    char i = 0, j = 0;
    long dim_i = 0, dim_j = 0;
    long stride_k = 0, stride_i = 0, stride_j = 0;
    long dim_k = 0;
};

PairLayout pair_layout(const CompositeModel& m, char k) {
    const long da = m.subsystems[0].dim(), db = m.subsystems[1].dim(), dc = m.subsystems[2].dim();
    PairLayout lay;
    auto [i, j] = m.complement(k);
    lay.i = i;
    lay.j = j;
    lay.dim_i = m.subsystem(i).dim();
    lay.dim_j = m.subsystem(j).dim();
    switch (k) {
    case 'A': lay.dim_k = da; lay.stride_k = db * dc; lay.stride_i = dc; lay.stride_j = 1; break;
    case 'B': lay.dim_k = db; lay.stride_k = dc; lay.stride_i = db * dc; lay.stride_j = 1; break;
    default: lay.dim_k = dc; lay.stride_k = 1; lay.stride_i = db * dc; lay.stride_j = dc; break;
    }
    return lay;
}

// Discrete G-twirl sum_m E^{d_k}(g_m) ⊗ U(g_m) f U(g_m)†. The orientation
// average collapses to an exact integer congruence gate because all
// eigenvalues are integers: mu sum_m e^{i Delta g_m} = [Delta ≡ 0 mod N_g].
ComplexMatrix twirl(const PhysicalSpace& space, char k, const std::string& d_k,
                    const ComplexMatrix& f, int sign) {
    const CompositeModel& m = space.model;
    const PairLayout lay = pair_layout(m, k);
    const SubsystemSpec& sub = m.subsystem(k);
    const SubsystemSpec& si = m.subsystem(lay.i);
    const SubsystemSpec& sj = m.subsystem(lay.j);
    const long kin = m.kin_dim();
    if (static_cast<long long>(kin) * kin > max_matrix_entries())
        fail(ErrorKind::Size, "kinematical operator exceeds the dimension guard");
    ComplexMatrix out(kin, kin);
    for (long kr = 0; kr < lay.dim_k; ++kr) {
        if (sub.levels[kr].label != d_k) continue;
        for (long kc = 0; kc < lay.dim_k; ++kc) {
            if (sub.levels[kc].label != d_k) continue;
            const long long dk = sub.levels[kc].value - sub.levels[kr].value;
            for (long ir = 0; ir < lay.dim_i; ++ir)
                for (long jr = 0; jr < lay.dim_j; ++jr) {
                    const long long sr = si.levels[ir].value + sj.levels[jr].value;
                    const long row = kr * lay.stride_k + ir * lay.stride_i + jr * lay.stride_j;
                    const long frow = ir * lay.dim_j + jr;
                    for (long ic = 0; ic < lay.dim_i; ++ic)
                        for (long jc = 0; jc < lay.dim_j; ++jc) {
                            const cplx fval = f.at(frow, ic * lay.dim_j + jc);
                            if (fval == cplx{0.0, 0.0}) continue;
                            const long long sc = si.levels[ic].value + sj.levels[jc].value;
                            const long long delta = dk + sign * (sr - sc);
                            if (m.mod_group(delta) != 0) continue;
                            out.at(row, kc * lay.stride_k + ic * lay.stride_i +
                                            jc * lay.stride_j) = fval;
                        }
                }
        }
    }
    return out;
}

ComplexMatrix commutator_on_physical(const PhysicalSpace& space, const ComplexMatrix& x,
                                     const ComplexMatrix& y) {
    ComplexMatrix xe = x * space.embedding;
    ComplexMatrix ye = y * space.embedding;
    return x * ye - y * xe;
}

ComplexMatrix masked_by_projector(const CompositeModel& model, char k, const ComplexMatrix& f) {
    std::vector<long> kept = kept_pair_indices(model, k);
    std::vector<char> keep(pair_dim(model, k), 0);
    for (long idx : kept) keep[idx] = 1;
    ComplexMatrix out(f.rows(), f.cols());
    for (long r = 0; r < f.rows(); ++r) {
        if (!keep[r]) continue;
        for (long c = 0; c < f.cols(); ++c)
            if (keep[c]) out.at(r, c) = f.at(r, c);
    }
    return out;
}

} // namespace

RelationalObservable relational_observable(const PhysicalSpace& space, char k,
                                           const std::string& d_k, const ComplexMatrix& f,
                                           const std::string& source) {
    const CompositeModel& m = space.model;
    auto labels = m.subsystem(k).sector_labels();
    if (std::find(labels.begin(), labels.end(), d_k) == labels.end())
        fail(ErrorKind::Precondition, std::string("no sector \"") + d_k + "\" for frame " + k);
    if (!f.is_square() || f.rows() != pair_dim(m, k))
        fail(ErrorKind::Dimension, "observable must act on the " +
                                       std::to_string(pair_dim(m, k)) + "-dimensional pair space");

    RelationalObservable best;
    best.frame = k;
    best.sector = d_k;
    best.source = source;
    best.defect = -1.0;
    for (int sign : {-1, +1}) {
        ComplexMatrix cand = twirl(space, k, d_k, f, sign);
        double defect = dirac_defect(space, cand);
        if (best.defect < 0.0 || defect < best.defect) {
            best.defect = defect;
            best.sign = sign;
            best.op = {SpaceTag{SpaceKind::Kinematical}, std::move(cand)};
        }
    }
    if (best.defect > 1e-10)
        fail(ErrorKind::Convention,
             "no orientation-conjugation sign yields an invariant observable (defect " +
                 std::to_string(best.defect) + "); check the model and group size");
    return best;
}

double dirac_defect(const PhysicalSpace& space, const ComplexMatrix& op) {
    const CompositeModel& m = space.model;
    if (!op.is_square() || op.rows() != m.kin_dim())
        fail(ErrorKind::Dimension, "operator does not act on the kinematical space");
    // C * embedding vanishes column-wise, so [op, C] emb reduces to -C op emb.
    double worst = 0.0;
    for (long p = 0; p < space.dim(); ++p) {
        const long col = m.flat_index(space.basis[p]);
        for (long r = 0; r < m.kin_dim(); ++r) {
            const double cr = static_cast<double>(m.constraint_value(m.unflatten(r)));
            if (cr == 0.0) continue;
            worst = std::max(worst, std::abs(cr * op.at(r, col)));
        }
    }
    return worst;
}

double dirac_defect(const PhysicalSpace& space, const RelationalObservable& obs) {
    return dirac_defect(space, obs.op.mat);
}

double homomorphism_defect(const PhysicalSpace& space, char k, const std::string& d_k,
                           const ComplexMatrix& f, const ComplexMatrix& h) {
    const CompositeModel& m = space.model;
    if (!f.is_square() || !h.is_square() || f.rows() != h.rows() || f.rows() != pair_dim(m, k))
        fail(ErrorKind::Dimension, "observables must both act on the pair space");
    ComplexMatrix ft = masked_by_projector(m, k, f);
    ComplexMatrix ht = masked_by_projector(m, k, h);
    ComplexMatrix fh = ft * ht - ht * ft;
    const ComplexMatrix ff = relational_observable(space, k, d_k, ft).op.mat;
    const ComplexMatrix fhh = relational_observable(space, k, d_k, ht).op.mat;
    const ComplexMatrix fcomm = relational_observable(space, k, d_k, fh).op.mat;
    ComplexMatrix lhs = fcomm * space.embedding;
    ComplexMatrix rhs = ff * (fhh * space.embedding) - fhh * (ff * space.embedding);
    return (lhs - rhs).norm_max();
}

LabeledOperator projected_observable(const CompositeModel& model, char k, const std::string& d_k,
                                     char target, const ComplexMatrix& m) {
    auto [i, j] = model.complement(k);
    if (target != i && target != j)
        fail(ErrorKind::Precondition, std::string("target ") + target +
                                          " is not described by frame " + k);
    const SubsystemSpec& st = model.subsystem(target);
    if (!m.is_square() || m.rows() != st.dim())
        fail(ErrorKind::Dimension, std::string("operator for subsystem ") + target + " must be " +
                                       std::to_string(st.dim()) + "x" + std::to_string(st.dim()));
    ComplexMatrix padded = (target == i)
                               ? tensor_product(m, ComplexMatrix::identity(model.subsystem(j).dim()))
                               : tensor_product(ComplexMatrix::identity(model.subsystem(i).dim()), m);
    std::vector<long> kept = kept_pair_indices(model, k);
    const long r = static_cast<long>(kept.size());
    ComplexMatrix compressed(r, r);
    for (long a = 0; a < r; ++a)
        for (long b = 0; b < r; ++b) compressed.at(a, b) = padded.at(kept[a], kept[b]);
    return {SpaceTag{SpaceKind::Reduced, k, d_k}, std::move(compressed)};
}

double theorem2_commutator_norm(const CompositeModel& model, char k, const std::string& d_k,
                                const ComplexMatrix& m_i, const ComplexMatrix& m_j) {
    auto [i, j] = model.complement(k);
    LabeledOperator a = projected_observable(model, k, d_k, i, m_i);
    LabeledOperator b = projected_observable(model, k, d_k, j, m_j);
    return commutator(a, b).mat.norm_max();
}

Theorem2Witness theorem2_witness_search(const CompositeModel& model, char k,
                                        const std::string& d_k) {
    auto [i, j] = model.complement(k);
    const long di = model.subsystem(i).dim();
    const long dj = model.subsystem(j).dim();
    const std::vector<long> kept = kept_pair_indices(model, k);
    const long r = static_cast<long>(kept.size());
    std::vector<long> ki(r), kj(r);
    for (long t = 0; t < r; ++t) {
        ki[t] = kept[t] / dj;
        kj[t] = kept[t] % dj;
    }
    Theorem2Witness best;
    ComplexMatrix ca(r, r), cb(r, r), comm(r, r);
    for (long p = 0; p < di; ++p)
        for (long q = 0; q < di; ++q) {
            for (long a = 0; a < r; ++a)
                for (long b = 0; b < r; ++b)
                    ca.at(a, b) = (ki[a] == p && ki[b] == q && kj[a] == kj[b]) ? 1.0 : 0.0;
            for (long u = 0; u < dj; ++u)
                for (long v = 0; v < dj; ++v) {
                    for (long a = 0; a < r; ++a)
                        for (long b = 0; b < r; ++b)
                            cb.at(a, b) = (kj[a] == u && kj[b] == v && ki[a] == ki[b]) ? 1.0 : 0.0;
                    comm = ca * cb - cb * ca;
                    double norm = comm.norm_max();
                    if (norm > best.max_norm) best = {norm, p, q, u, v};
                }
        }
    return best;
}

Theorem1Report theorem1_witness(const PhysicalSpace& space, const ComplexMatrix& f_on_c) {
    const CompositeModel& m = space.model;
    const SubsystemSpec& sc = m.subsystem('C');
    if (!f_on_c.is_square() || f_on_c.rows() != sc.dim())
        fail(ErrorKind::Dimension, "witness observable must act on subsystem C");
    double mixing = 0.0;
    for (long r = 0; r < sc.dim(); ++r)
        for (long c = 0; c < sc.dim(); ++c)
            mixing = std::max(mixing, std::abs(f_on_c.at(r, c) *
                                               static_cast<double>(sc.levels[c].value -
                                                                   sc.levels[r].value)));
    if (mixing < 1e-12)
        fail(ErrorKind::Precondition,
             "witness observable is a constant of motion; the check is vacuous");

    auto diag_values = [&](char s) {
        const SubsystemSpec& sub = m.subsystem(s);
        std::vector<cplx> d(sub.dim());
        for (long idx = 0; idx < sub.dim(); ++idx)
            d[idx] = static_cast<double>(sub.levels[idx].value);
        return ComplexMatrix::diagonal(d);
    };

    const std::string da = m.subsystem('A').sector_labels().front();
    const std::string db = m.subsystem('B').sector_labels().front();

    // Frame A describes (B, C); C's observable relative to A.
    ComplexMatrix f_ba = tensor_product(ComplexMatrix::identity(m.subsystem('B').dim()), f_on_c);
    RelationalObservable f_c_rel_a = relational_observable(space, 'A', da, f_ba, "f on C | A");
    ComplexMatrix c_a = local_operator(m, 'A', diag_values('A')).mat;
    Theorem1Report rep;
    rep.cross_frame_norm =
        commutator_on_physical(space, f_c_rel_a.op.mat, c_a).norm_max();

    // Frame B describes (A, C); both observables relative to the same frame.
    ComplexMatrix f_ac = tensor_product(ComplexMatrix::identity(m.subsystem('A').dim()), f_on_c);
    RelationalObservable f_c_rel_b = relational_observable(space, 'B', db, f_ac, "f on C | B");
    ComplexMatrix g_ac = tensor_product(diag_values('A'), ComplexMatrix::identity(sc.dim()));
    RelationalObservable g_a_rel_b = relational_observable(space, 'B', db, g_ac, "C_A | B");
    rep.same_frame_norm =
        commutator_on_physical(space, f_c_rel_b.op.mat, g_a_rel_b.op.mat).norm_max();

    rep.success = rep.cross_frame_norm > 1e-6 && rep.same_frame_norm <= 1e-10;
    return rep;
}

ComplexMatrix relational_observable_series(const CompositeModel& model, char k,
                                           const std::string& d_k, const ComplexMatrix& f,
                                           int order) {
    using lcplx = std::complex<long double>;
    const PairLayout lay = pair_layout(model, k);
    const SubsystemSpec& sub = model.subsystem(k);
    const SubsystemSpec& si = model.subsystem(lay.i);
    const SubsystemSpec& sj = model.subsystem(lay.j);
    if (!f.is_square() || f.rows() != lay.dim_i * lay.dim_j)
        fail(ErrorKind::Dimension, "observable must act on the pair space");
    if (order < 0) fail(ErrorKind::Precondition, "series order must be nonnegative");

    const long long ng = model.orientation_group_size;
    // Centered representatives keep |g * Delta| small; they change nothing in
    // the limit because phases only ever appear at integer multiples of 2pi/N_g.
    auto centered = [&](long long v) {
        long long r = model.mod_group(v);
        return (r > ng / 2) ? r - ng : r;
    };
    const long double mu = 1.0L / static_cast<long double>(ng);
    const long double two_pi = 2.0L * std::numbers::pi_v<long double>;
    std::vector<long double> angles(ng);
    for (long long m = 0; m < ng; ++m) angles[m] = two_pi * static_cast<long double>(centered(m)) / ng;

    const long dim_ij = lay.dim_i * lay.dim_j;
    std::vector<long double> pair_sum(dim_ij);
    for (long ii = 0; ii < lay.dim_i; ++ii)
        for (long jj = 0; jj < lay.dim_j; ++jj)
            pair_sum[ii * lay.dim_j + jj] =
                static_cast<long double>(centered(si.levels[ii].value + sj.levels[jj].value));

    std::vector<lcplx> nested(static_cast<size_t>(dim_ij) * dim_ij);
    for (long r = 0; r < dim_ij; ++r)
        for (long c = 0; c < dim_ij; ++c)
            nested[static_cast<size_t>(r) * dim_ij + c] =
                lcplx(f.at(r, c).real(), f.at(r, c).imag());

    const long kin = model.kin_dim();
    std::vector<lcplx> acc(static_cast<size_t>(kin) * kin);
    std::vector<lcplx> moment(static_cast<size_t>(lay.dim_k) * lay.dim_k);
    std::vector<long> krows;
    for (long kr = 0; kr < lay.dim_k; ++kr)
        if (sub.levels[kr].label == d_k) krows.push_back(kr);

    lcplx coeff(1.0L, 0.0L); // i^n / n!
    for (int n = 0; n <= order; ++n) {
        if (n > 0) {
            coeff *= lcplx(0.0L, 1.0L) / static_cast<long double>(n);
            for (long r = 0; r < dim_ij; ++r)
                for (long c = 0; c < dim_ij; ++c)
                    nested[static_cast<size_t>(r) * dim_ij + c] *= pair_sum[c] - pair_sum[r];
        }
        std::fill(moment.begin(), moment.end(), lcplx(0.0L, 0.0L));
        for (long kr : krows)
            for (long kc : krows) {
                long double phase_scale =
                    static_cast<long double>(centered(sub.levels[kr].value - sub.levels[kc].value));
                lcplx sum(0.0L, 0.0L);
                for (long long m = 0; m < ng; ++m) {
                    long double wn = 1.0L;
                    for (int p = 0; p < n; ++p) wn *= angles[m];
                    long double ph = -phase_scale * angles[m];
                    sum += lcplx(wn * std::cos(ph), wn * std::sin(ph));
                }
                moment[static_cast<size_t>(kr) * lay.dim_k + kc] = mu * sum;
            }
        for (long kr : krows)
            for (long kc : krows) {
                lcplx w = coeff * moment[static_cast<size_t>(kr) * lay.dim_k + kc];
                if (w == lcplx(0.0L, 0.0L)) continue;
                for (long ir = 0; ir < lay.dim_i; ++ir)
                    for (long jr = 0; jr < lay.dim_j; ++jr) {
                        const long row = kr * lay.stride_k + ir * lay.stride_i + jr * lay.stride_j;
                        const long frow = ir * lay.dim_j + jr;
                        for (long ic = 0; ic < lay.dim_i; ++ic)
                            for (long jc = 0; jc < lay.dim_j; ++jc) {
                                lcplx val = nested[static_cast<size_t>(frow) * dim_ij +
                                                   ic * lay.dim_j + jc];
                                if (val == lcplx(0.0L, 0.0L)) continue;
                                acc[static_cast<size_t>(row) * kin + kc * lay.stride_k +
                                    ic * lay.stride_i + jc * lay.stride_j] += w * val;
                            }
                    }
            }
    }

    ComplexMatrix out(kin, kin);
    for (long r = 0; r < kin; ++r)
        for (long c = 0; c < kin; ++c) {
            lcplx z = acc[static_cast<size_t>(r) * kin + c];
            out.at(r, c) = cplx(static_cast<double>(z.real()), static_cast<double>(z.imag()));
        }
    return out;
}

} // namespace qrf
