#include "rmfm/dominance.hpp"

#include "rmfm/hypothesis.hpp"

namespace rmfm {

DominanceReport check_dominance(const RatMatrix& x, const RatMatrix& h, const RatMatrix& l) {
    const std::size_t n = x.rows();
    if (h.rows() != n || l.rows() != n) throw DimensionError("X, H and L must have the same number of rows");

    const Projector px = projector(x);
    if (!(px.matrix() * h == h)) throw PreconditionError("sp(H) is not contained in sp(X)");
    const RatMatrix xt = x.transpose();
    if (!(colspace(xt * l) == colspace(xt * h))) throw PreconditionError("sp(X'L) differs from sp(X'H)");

    const Projector ph = projector(h);
    const Projector pl = projector(l);
    const RatMatrix residual = RatMatrix::identity(n) - px.matrix();

    DominanceReport r;
    const RatMatrix pxl = px.matrix() * l;
    r.span_recovered = colspace(pxl) == colspace(h);
    r.containment = sum(colspace(h), colspace(residual)).contains(l);
    r.nnd_holds = is_nnd(xt * ph.matrix() * x - xt * pl.matrix() * x);

    r.df.nu_h = ph.rank();
    r.df.nu_pxl = rank(pxl);
    r.df.nu_l = pl.rank();
    r.df.upper = r.df.nu_h + n - px.rank();

    const RatMatrix q = ph.matrix() + residual - pl.matrix();
    r.q_idempotent = q.is_symmetric() && q * q == q;
    return r;
}

}  // namespace rmfm
