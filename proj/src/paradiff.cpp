#include "paraflow/paradiff.hpp"

#include <cmath>
#include <stdexcept>

#include "paraflow/compose.hpp"
#include "paraflow/fitting.hpp"
#include "paraflow/spectral_ops.hpp"

namespace paraflow::paradiff {

using spectral::DyadicFamily;

namespace {

// Highest block index that can intersect the dealiased band.
int top_block(const Grid& g, const DyadicFamily& lp) {
    double rmax = std::sqrt(2.0) * g.cutoff();
    int j = lp.max_index();
    while (j > 1 && std::ldexp(1.0, j - 1) > rmax) --j;
    return j;
}

void check_resolvable(const ScalarField& f) {
    const Grid& g = f.grid();
    double outside = 0.0, inside = 0.0;
    for (int a1 = 0; a1 < g.n; ++a1) {
        for (int a2 = 0; a2 < g.n; ++a2) {
            double m = std::abs(f.coef()[static_cast<std::size_t>(a1) * g.n + a2]);
            if (g.in_band(a1, a2))
                inside = std::max(inside, m);
            else
                outside = std::max(outside, m);
        }
    }
    if (outside > 1e-10 * std::max(inside, 1e-300))
        throw std::invalid_argument("field has coefficient mass beyond the dealias band");
}

}  // namespace

ScalarField paraproduct(const ScalarField& a, const ScalarField& u) {
    require_same_grid(a.grid(), u.grid());
    const Grid& g = a.grid();
    DyadicFamily lp(g);
    const int jtop = top_block(g, lp);

    std::vector<cplx> acc(g.size(), cplx(0.0));
    for (int j = 3; j <= jtop; ++j) {
        ScalarField blk = lp.block(u, j);
        if (blk.max_coef() == 0.0) continue;
        auto pu = blk.to_physical_complex();
        auto pa = lp.partial_sum(a, j - 3).to_physical_complex();
        for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += pa[i] * pu[i];
    }
    ScalarField out = ScalarField::from_physical_complex(g, acc);
    out.dealias();
    return out;
}

ScalarField paraproduct_adjoint(const ScalarField& a, const ScalarField& v) {
    require_same_grid(a.grid(), v.grid());
    const Grid& g = a.grid();
    DyadicFamily lp(g);
    const int jtop = top_block(g, lp);

    auto pv = v.to_physical_complex();
    ScalarField acc(g);
    for (int j = 3; j <= jtop; ++j) {
        auto pa = lp.partial_sum(a, j - 3).to_physical_complex();
        for (std::size_t i = 0; i < pa.size(); ++i) pa[i] *= pv[i];
        ScalarField term = ScalarField::from_physical_complex(g, pa);
        term.dealias();
        acc += lp.block(term, j);
    }
    return acc;
}

ScalarField bony_remainder(const ScalarField& a, const ScalarField& u) {
    return spectral::product(a, u) - paraproduct(a, u) - paraproduct(u, a);
}

ScalarField composition_remainder(const ScalarField& a, const ScalarField& b,
                                  const ScalarField& u) {
    return paraproduct(a, paraproduct(b, u)) - paraproduct(spectral::product(a, b), u);
}

ScalarField multiplier_commutator(
    const ScalarField& a, const std::function<cplx(double, double)>& symbol,
    const ScalarField& u) {
    return paraproduct(a, spectral::multiplier(u, symbol)) -
           spectral::multiplier(paraproduct(a, u), symbol);
}

ScalarField paraproduct_dot(const VectorField& a, const VectorField& u) {
    return paraproduct(a[0], u[0]) + paraproduct(a[1], u[1]);
}

VectorField paraproduct_mat(const MatrixField& A, const VectorField& y) {
    VectorField out(A.grid());
    for (int i = 0; i < 2; ++i)
        out[i] = paraproduct(A(i, 0), y[0]) + paraproduct(A(i, 1), y[1]);
    return out;
}

VectorField bony_remainder_mat(const MatrixField& A, const VectorField& y) {
    VectorField out(A.grid());
    for (int i = 0; i < 2; ++i)
        out[i] = bony_remainder(A(i, 0), y[0]) + bony_remainder(A(i, 1), y[1]);
    return out;
}

ScalarField paracompose(const VectorField& displacement, const ScalarField& f) {
    require_same_grid(displacement.grid(), f.grid());
    check_resolvable(f);
    if (det_defect(displacement) > 1e-4)
        throw std::invalid_argument("paracompose: Jacobian determinant deviates from 1");

    VectorField grad = spectral::gradient(f);
    auto pulled = compose::pullback_many({&f, &grad[0], &grad[1]}, displacement);
    return pulled[0] - paraproduct(pulled[1], displacement[0]) -
           paraproduct(pulled[2], displacement[1]);
}

namespace {

double vec_l2(const VectorField& v) {
    double a = spectral::l2_norm(v[0]);
    double b = spectral::l2_norm(v[1]);
    return std::sqrt(a * a + b * b);
}

// Shared assembly for the gradient / perp-gradient identities; `perp`
// switches the symbol matrix ((Dchi)^T vs (Dchi)^{-1}) and the derivative
// operator applied to f.
IdentityResidual identity_residual(const VectorField& displacement,
                                   const ScalarField& f, bool perp) {
    const Grid& g = f.grid();
    require_same_grid(displacement.grid(), g);
    check_resolvable(f);

    MatrixField Dchi = jacobian(displacement);
    MatrixField sym = perp ? inverse_unimodular(Dchi) : transpose(Dchi);

    VectorField df = perp ? spectral::perp_gradient(f) : spectral::gradient(f);
    // Hessian of the derivative fields: hess(j, l) = d_l (df^j).
    MatrixField hess(g);
    for (int j = 0; j < 2; ++j)
        for (int l = 0; l < 2; ++l) hess(j, l) = spectral::derivative(df[j], l);

    // One evaluator pass for every composition this identity needs.
    auto pulled = compose::pullback_many(
        {&f, &df[0], &df[1], &hess(0, 0), &hess(0, 1), &hess(1, 0), &hess(1, 1)},
        displacement);
    const ScalarField& f_chi = pulled[0];
    VectorField df_chi(pulled[1], pulled[2]);
    MatrixField hess_chi(g);
    hess_chi(0, 0) = pulled[3];
    hess_chi(0, 1) = pulled[4];
    hess_chi(1, 0) = pulled[5];
    hess_chi(1, 1) = pulled[6];

    // chi* f and chi* (df^j).
    ScalarField para_f =
        f_chi - paraproduct(df_chi[0], displacement[0]) - paraproduct(df_chi[1], displacement[1]);
    VectorField para_df(g);
    for (int j = 0; j < 2; ++j)
        para_df[j] = df_chi[j] - paraproduct(hess_chi(j, 0), displacement[0]) -
                     paraproduct(hess_chi(j, 1), displacement[1]);

    IdentityResidual out;
    out.lhs = perp ? spectral::perp_gradient(para_f) : spectral::gradient(para_f);
    out.r1 = bony_remainder_mat(sym, df_chi);

    out.r2 = VectorField(g);
    for (int i = 0; i < 2; ++i) {
        ScalarField acc(g);
        for (int j = 0; j < 2; ++j) {
            for (int l = 0; l < 2; ++l) {
                acc += paraproduct(sym(i, j), paraproduct(hess_chi(j, l), displacement[l])) -
                       paraproduct(spectral::product(sym(i, j), hess_chi(j, l)),
                                   displacement[l]);
            }
        }
        out.r2[i] = acc;
    }

    out.rhs = paraproduct_mat(sym, para_df) + out.r1 + out.r2;
    double denom = vec_l2(out.lhs);
    out.defect = denom > 0.0 ? vec_l2(out.lhs - out.rhs) / denom : 0.0;
    return out;
}

}  // namespace

IdentityResidual gradient_identity_residual(const VectorField& displacement,
                                            const ScalarField& f) {
    return identity_residual(displacement, f, false);
}

IdentityResidual perp_gradient_identity_residual(const VectorField& displacement,
                                                 const ScalarField& f) {
    return identity_residual(displacement, f, true);
}

OperatorOrderEstimate estimate_order(
    const std::function<ScalarField(const ScalarField&)>& op, const Grid& g,
    int j_lo, int j_hi, int dir1, int dir2) {
    if (j_hi - j_lo + 1 < 4)
        throw std::invalid_argument("estimate_order: need at least 4 probes");
    int reach = (1 << j_hi) * std::max(std::abs(dir1), std::abs(dir2));
    if (reach > g.cutoff())
        throw std::invalid_argument("estimate_order: probe beyond dealias band");

    OperatorOrderEstimate est;
    for (int j = j_lo; j <= j_hi; ++j) {
        ScalarField probe(g);
        probe.set_mode((1 << j) * dir1, (1 << j) * dir2, cplx(1.0, 0.0));
        double in = spectral::l2_norm(probe);
        double outn = spectral::l2_norm(op(probe));
        est.probe_frequencies.push_back(std::ldexp(1.0, j));
        est.quotients.push_back(outn / in);
    }
    auto fit = fitting::log_log(est.probe_frequencies, est.quotients);
    est.fitted_order = fit.slope;
    est.residual = fit.r2;
    return est;
}

MatrixField jacobian(const VectorField& displacement) {
    const Grid& g = displacement.grid();
    MatrixField J(g);
    for (int i = 0; i < 2; ++i) {
        for (int j = 0; j < 2; ++j) {
            J(i, j) = spectral::derivative(displacement[i], j);
            if (i == j) J(i, j).set_mode(0, 0, J(i, j).at_mode(0, 0) + 1.0);
        }
    }
    return J;
}

MatrixField inverse_unimodular(const MatrixField& A) {
    MatrixField inv(A.grid());
    inv(0, 0) = A(1, 1);
    inv(0, 1) = -A(0, 1);
    inv(1, 0) = -A(1, 0);
    inv(1, 1) = A(0, 0);
    return inv;
}

MatrixField transpose(const MatrixField& A) {
    MatrixField t(A.grid());
    t(0, 0) = A(0, 0);
    t(0, 1) = A(1, 0);
    t(1, 0) = A(0, 1);
    t(1, 1) = A(1, 1);
    return t;
}

double det_defect(const VectorField& displacement) {
    MatrixField J = jacobian(displacement);
    auto a = J(0, 0).to_physical();
    auto b = J(0, 1).to_physical();
    auto c = J(1, 0).to_physical();
    auto d = J(1, 1).to_physical();
    double worst = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i)
        worst = std::max(worst, std::abs(a[i] * d[i] - b[i] * c[i] - 1.0));
    return worst;
}

}  // namespace paraflow::paradiff
