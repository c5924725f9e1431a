"""Compatible R-matrix pairs and their certification.

A pair (R, F) of invertible 2-leg operators drives everything downstream:
R must be a Hecke-type braiding, F a braiding compatible with R, and F must
be skew invertible so that the weighted trace (the F-trace) exists.  Pairs
are built through `build_pair`, which runs every certificate and refuses to
hand out an uncertified object unless explicitly asked to.
"""

import json
from dataclasses import dataclass

from . import projectors
from .errors import (
    AdmissibilityError,
    CertificationError,
    DimensionError,
    InvalidParameterError,
    NotHeckeError,
    NotSkewInvertibleError,
    SingularMatrixError,
)
from .scalars import ONE, q_number, rat
from .tensor import TensorOp, inverse, permutation_p, rank

CORE_CERTIFICATES = (
    "braid_r",
    "braid_f",
    "compatibility",
    "hecke",
    "skew_inverse",
    "ftrace_identities",
)


def check_braid(r):
    """Braid relation on three legs: R12 R23 R12 = R23 R12 R23."""
    if r.legs != 2:
        raise DimensionError("braid check needs a 2-leg operator")
    r12 = r.embed(1, 3)
    r23 = r.embed(2, 3)
    return r12 @ r23 @ r12 == r23 @ r12 @ r23


def check_compatibility(r, f):
    """Both mixed braid relations between R and F on three legs."""
    if r.legs != 2 or f.legs != 2 or r.n != f.n:
        raise DimensionError("compatibility check needs matching 2-leg operators")
    r12, r23 = r.embed(1, 3), r.embed(2, 3)
    f12, f23 = f.embed(1, 3), f.embed(2, 3)
    return (r12 @ f23 @ f12 == f23 @ f12 @ r23) and (
        f12 @ f23 @ r12 == r23 @ f12 @ f23
    )


@dataclass
class HeckeSplit:
    """Spectral idempotents of a Hecke braiding: R = q*s2 - (1/q)*a2."""

    q: object
    s2: TensorOp
    a2: TensorOp

    def ranks(self):
        return rank(self.s2), rank(self.a2)


def hecke_split(r, q):
    """Split R into its symmetric/antisymmetric idempotents.

    Requires the quadratic relation R^2 = (q - 1/q) R + Id and 2_q != 0.
    """
    qv = rat(q)
    if qv == 0:
        raise InvalidParameterError("q must be nonzero")
    n = r.n
    ident = TensorOp.identity(n, 2)
    if r @ r != (qv - 1 / qv) * r + ident:
        raise NotHeckeError("R does not satisfy the Hecke relation at q=%s" % qv)
    two_q = q_number(2, qv)
    if two_q == 0:
        raise AdmissibilityError("2_q vanishes at q=%s" % qv)
    s2 = (r + (1 / qv) * ident) * (1 / two_q)
    a2 = (qv * ident - r) * (1 / two_q)
    split = HeckeSplit(qv, s2, a2)
    # implied by the quadratic relation; cheap to confirm outright
    if s2 @ s2 != s2 or a2 @ a2 != a2 or s2 + a2 != ident:
        raise CertificationError("Hecke idempotents failed their algebra")
    if not (s2 @ a2).is_zero() or qv * s2 - (1 / qv) * a2 != r:
        raise CertificationError("Hecke idempotents failed their algebra")
    return split


def skew_inverse(f):
    """Solve tr_2(Psi_12 F_23) = P_13 for Psi, then verify by substitution."""
    n = f.n
    dim = n * n
    import numpy as np

    g = np.empty((dim, dim), dtype=object)
    for b in range(n):
        for m in range(n):
            for c in range(n):
                for ff in range(n):
                    g[b * n + m, c * n + ff] = f.mat[m * n + c, b * n + ff]
    gop = TensorOp(n, 2, g)
    try:
        ginv = inverse(gop)
    except SingularMatrixError as exc:
        raise NotSkewInvertibleError("defining system is singular") from exc
    h = np.empty((dim, dim), dtype=object)
    from .scalars import ZERO

    for a in range(n):
        for d in range(n):
            for c in range(n):
                for ff in range(n):
                    h[a * n + d, c * n + ff] = ONE if (a == ff and c == d) else ZERO
    pt = h @ ginv.mat
    psi_mat = np.empty((dim, dim), dtype=object)
    for a in range(n):
        for d in range(n):
            for b in range(n):
                for m in range(n):
                    psi_mat[a * n + b, d * n + m] = pt[a * n + d, b * n + m]
    psi = TensorOp(n, 2, psi_mat)
    check = (psi.embed(1, 3) @ f.embed(2, 3)).partial_trace([2])
    if check != permutation_p(n):
        raise CertificationError("skew inverse failed the substitution check")
    return psi


def d_matrix(psi):
    """Trace the second leg of Psi: D = tr_2(Psi_12)."""
    return psi.partial_trace([2])


def _matrix_unit(n, a, b):
    u = TensorOp.zeros(n, 1)
    u.mat[a, b] = ONE
    return u


class RFPair:
    """A certified compatible pair with its derived data and caches."""

    def __init__(self, n, q, r, f, f_inv, split, psi, d, certificates):
        self.n = n
        self.q = q
        self.r = r
        self.f = f
        self.f_inv = f_inv
        self.split = split
        self.psi = psi
        self.d = d
        self.certificates = certificates
        self.height = None
        self._towers = {}

    @property
    def s2(self):
        return self.split.s2

    @property
    def a2(self):
        return self.split.a2

    @property
    def certified(self):
        return all(self.certificates.get(k, False) for k in CORE_CERTIFICATES)

    def require_certified(self):
        if not self.certified:
            failed = [k for k in CORE_CERTIFICATES if not self.certificates.get(k)]
            raise CertificationError("pair is not certified: %s" % ", ".join(failed))

    def _tower(self, kind):
        if kind not in self._towers:
            self._towers[kind] = projectors.ProjectorTower(kind, self.r, self.q)
        return self._towers[kind]

    def antisymmetrizer(self, k):
        return self._tower("antisymmetrizer").get(k)

    def symmetrizer(self, k):
        return self._tower("symmetrizer").get(k)

    def d_product(self, legs, total):
        """Product of D factors embedded on the given legs."""
        out = TensorOp.identity(self.n, total)
        for l in legs:
            out = out @ self.d.embed(l, total)
        return out

    def f_trace(self, x, legs):
        """Weighted partial trace: insert D on each traced leg, then trace.

        Works uniformly for scalar TensorOps and for matrices with
        noncommutative entries, which implement the same protocol.
        """
        legs = sorted(set(legs))
        if not legs:
            return x.copy()
        dprod = self.d_product(legs, x.legs)
        return (dprod @ x).partial_trace(legs)

    def f_trace_full(self, x):
        return self.f_trace(x, range(1, x.legs + 1))


def f_trace(pair, x, legs):
    return pair.f_trace(x, legs)


def check_ftrace_identities(pair):
    """The three defining properties of the F-trace."""
    return not ftrace_identity_failures(pair)


def ftrace_identity_failures(pair):
    n, f, d = pair.n, pair.f, pair.d
    ident1 = TensorOp.identity(n, 1)
    failures = []
    if pair.f_trace(f, [2]) != ident1:
        failures.append("partial_f_trace_of_f")
    dd = d.embed(1, 2) @ d.embed(2, 2)
    if f @ dd != dd @ f:
        failures.append("f_commutes_with_dd")
    f_inv = pair.f_inv
    for eps, left, right in (("+", f, f_inv), ("-", f_inv, f)):
        for a in range(n):
            for b in range(n):
                x = _matrix_unit(n, a, b)
                lhs = pair.f_trace(left @ x.embed(1, 2) @ right, [2])
                rhs = ident1 * (d @ x).trace()
                if lhs != rhs:
                    failures.append("conjugation_invariance_eps%s" % eps)
                    break
            else:
                continue
            break
    return failures


def check_height(pair, h):
    """Evenness at height h: rank-1 top antisymmetrizer that truncates."""
    a_top = pair.antisymmetrizer(h)
    ok = rank(a_top) == 1
    if ok:
        qv = rat(pair.q)
        a_emb = a_top.embed(1, h + 1)
        mid = (qv**h) * TensorOp.identity(pair.n, h + 1) - q_number(h, qv) * pair.r.embed(h, h + 1)
        ok = (a_emb @ mid @ a_emb).is_zero()
    pair.certificates["height"] = ok
    if ok:
        pair.height = h
    return ok


def build_pair(n, q, r, f, require=True):
    """Run every core certificate and assemble the pair object."""
    qv = rat(q)
    if qv == 0:
        raise InvalidParameterError("q must be nonzero")
    if r.n != n or f.n != n or r.legs != 2 or f.legs != 2:
        raise DimensionError("R and F must be 2-leg operators on dimension n")
    certs = {}
    certs["braid_r"] = check_braid(r)
    certs["braid_f"] = check_braid(f)
    certs["compatibility"] = check_compatibility(r, f)
    try:
        split = hecke_split(r, qv)
        certs["hecke"] = True
    except (NotHeckeError, AdmissibilityError):
        split = None
        certs["hecke"] = False
    f_inv = inverse(f)
    try:
        psi = skew_inverse(f)
        certs["skew_inverse"] = True
    except NotSkewInvertibleError:
        psi = None
        certs["skew_inverse"] = False
    d = d_matrix(psi) if psi is not None else None
    pair = RFPair(n, qv, r, f, f_inv, split, psi, d, certs)
    certs["ftrace_identities"] = (
        check_ftrace_identities(pair) if d is not None else False
    )
    if require and not pair.certified:
        failed = [k for k in CORE_CERTIFICATES if not certs.get(k)]
        raise CertificationError("pair certification failed: %s" % ", ".join(failed))
    return pair


def dj_rmatrix(n, q, params=None):
    """Standard multiparameter deformation braiding on dimension n.

    Basis action: e_i (x) e_i -> q e_i (x) e_i; for i < j the basis vectors
    swap with weight p_ij, and for i > j an extra (q - 1/q) e_i (x) e_j term
    appears.  The result self-certifies the braid and Hecke conditions.
    """
    qv = rat(q)
    if qv == 0:
        raise InvalidParameterError("q must be nonzero")
    if params is None:
        params = [[ONE] * n for _ in range(n)]
    if len(params) != n or any(len(row) != n for row in params):
        raise InvalidParameterError("parameter table must be %dx%d" % (n, n))
    p = [[rat(v) for v in row] for row in params]
    for i in range(n):
        if p[i][i] != 1:
            raise InvalidParameterError("diagonal parameters must be 1")
        for j in range(n):
            if p[i][j] == 0:
                raise InvalidParameterError("parameters must be nonzero")
            if p[i][j] * p[j][i] != 1:
                raise InvalidParameterError(
                    "parameters must satisfy p[i][j] * p[j][i] = 1"
                )
    op = TensorOp.zeros(n, 2)
    for c in range(n):
        for dd in range(n):
            col = c * n + dd
            if c == dd:
                op.mat[col, col] = qv
            else:
                op.mat[dd * n + c, col] = p[c][dd]
                if c > dd:
                    op.mat[col, col] = qv - 1 / qv
    if not check_braid(op):
        raise CertificationError("constructed operator violates the braid relation")
    hecke_split(op, qv)
    return op


def pair_from_config(cfg, base_dir=".", require=True):
    """Build a pair from the JSON-friendly config mapping."""
    import os

    if not isinstance(cfg, dict):
        raise InvalidParameterError("config must be a mapping")
    try:
        n = int(cfg["n"])
        qv = rat(cfg["q"])
    except (KeyError, TypeError) as exc:
        raise InvalidParameterError("config needs integer n and rational q") from exc
    f_choice = cfg.get("f_choice", "R")
    multiparams = cfg.get("multiparams")
    if cfg.get("r_file"):
        with open(os.path.join(base_dir, cfg["r_file"])) as fh:
            r = TensorOp.from_json_dict(json.load(fh))
    else:
        r = dj_rmatrix(n, qv, multiparams)
    if f_choice == "P":
        f = permutation_p(n)
    elif f_choice == "R":
        f = r
    elif f_choice == "file":
        if not cfg.get("f_file"):
            raise InvalidParameterError("f_choice 'file' needs f_file")
        with open(os.path.join(base_dir, cfg["f_file"])) as fh:
            f = TensorOp.from_json_dict(json.load(fh))
    else:
        raise InvalidParameterError("unknown f_choice %r" % (f_choice,))
    return build_pair(n, qv, r, f, require=require)
