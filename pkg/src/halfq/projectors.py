"""Towers of q-deformed antisymmetrizers and symmetrizers.

Each projector on k+1 legs is produced from the k-leg one by a two-sided
recursion: multiply by (q^k Id - k_q R_k) for the antisymmetrizer, or by
(q^-k Id + k_q R_k) for the symmetrizer, sandwiched between two copies of
the previous projector, and divide by (k+1)_q.  The same expression built
from the shifted projector and R_1 must agree exactly; both versions are
computed and compared at every level.
"""

from .errors import CertificationError, InvalidParameterError, RecursionMismatchError
from .scalars import q_number, rat, require_admissible
from .tensor import TensorOp

KINDS = ("antisymmetrizer", "symmetrizer")


class ProjectorTower:
    """Lazily extended tower of projectors for one braiding."""

    def __init__(self, kind, r, q):
        if kind not in KINDS:
            raise InvalidParameterError("unknown projector kind %r" % (kind,))
        if r.legs != 2:
            raise InvalidParameterError("tower needs a 2-leg braiding")
        self.kind = kind
        self.r = r
        self.q = rat(q)
        self._ops = [None, TensorOp.identity(r.n, 1)]

    def get(self, k):
        if k < 1:
            raise InvalidParameterError("projector level must be >= 1")
        while len(self._ops) <= k:
            self._extend()
        return self._ops[k]

    def _extend(self):
        k = len(self._ops) - 1
        qv = self.q
        require_admissible(k + 1, qv)
        prev = self._ops[k]
        width = k + 1
        n = self.r.n
        ident = TensorOp.identity(n, width)
        if self.kind == "antisymmetrizer":
            def mid(pos):
                return (qv**k) * ident - q_number(k, qv) * self.r.embed(pos, width)
        else:
            def mid(pos):
                return (qv**-k) * ident + q_number(k, qv) * self.r.embed(pos, width)
        low = prev.embed(1, width)
        right = low @ mid(k) @ low
        high = prev.embed(2, width)
        left = high @ mid(1) @ high
        if left != right:
            raise RecursionMismatchError(
                "left and right %s recursions disagree at k=%d" % (self.kind, k + 1)
            )
        nxt = right * (1 / q_number(k + 1, qv))
        if nxt @ nxt != nxt:
            raise CertificationError(
                "%s at level %d is not idempotent" % (self.kind, k + 1)
            )
        self._ops.append(nxt)


def antisymmetrizer(r, q, k):
    return ProjectorTower("antisymmetrizer", r, q).get(k)


def symmetrizer(r, q, k):
    return ProjectorTower("symmetrizer", r, q).get(k)


def check_eigen_absorption(kind, r, q, k, proj=None):
    """R_i P = P R_i = lambda P inside the projector's leg range."""
    if proj is None:
        proj = ProjectorTower(kind, r, q).get(k)
    lam = rat(q) if kind == "symmetrizer" else -1 / rat(q)
    for i in range(1, k):
        ri = r.embed(i, k)
        if ri @ proj != lam * proj or proj @ ri != lam * proj:
            return False
    return True
