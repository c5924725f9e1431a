"""Dense exact operators on tensor powers of an n-dimensional space.

A TensorOp is an endomorphism of V^(tensor N), dim V = n, stored as a dense
n^N x n^N matrix of exact rationals.  Row and column multi-indices are
ordered lexicographically with leg 1 most significant, so the matrix of
A (x) B on legs (1, 2) is the ordinary Kronecker product kron(A, B).
Target sizes stay small (n <= 3, N <= 5); nothing here tries to scale past
dense exact linear algebra.
"""

import functools
import json

import numpy as np

from .errors import DimensionError, InvalidParameterError, SingularMatrixError
from .scalars import ONE, ZERO, format_rational, parse_rational, rat

# density below which composition switches to dict-of-rows products
_SPARSE_CUTOFF = 0.30


@functools.lru_cache(maxsize=None)
def basis_tuples(n, legs):
    """All leg-index tuples in lexicographic order, values 0..n-1."""
    if legs == 0:
        return ((),)
    shorter = basis_tuples(n, legs - 1)
    return tuple(t + (i,) for t in shorter for i in range(n))


def tuple_index(t, n):
    idx = 0
    for v in t:
        idx = idx * n + v
    return idx


def _zeros(dim):
    m = np.empty((dim, dim), dtype=object)
    m[:] = ZERO
    return m


def _eye(dim):
    m = _zeros(dim)
    for i in range(dim):
        m[i, i] = ONE
    return m


class TensorOp:
    """Exact matrix of an operator on V^(tensor legs)."""

    __slots__ = ("n", "legs", "mat")

    def __init__(self, n, legs, mat):
        if n < 1 or legs < 0:
            raise InvalidParameterError("need n >= 1 and legs >= 0")
        dim = n**legs
        if mat.shape != (dim, dim):
            raise DimensionError(
                "matrix shape %s does not match %d legs of dimension %d"
                % (mat.shape, legs, n)
            )
        self.n = n
        self.legs = legs
        self.mat = mat

    # -- constructors -------------------------------------------------

    @classmethod
    def zeros(cls, n, legs):
        return cls(n, legs, _zeros(n**legs))

    @classmethod
    def identity(cls, n, legs):
        return cls(n, legs, _eye(n**legs))

    @classmethod
    def from_entries(cls, n, legs, entries):
        """Build from a nested list of ints / rational strings / rationals."""
        dim = n**legs
        if len(entries) != dim or any(len(row) != dim for row in entries):
            raise DimensionError("expected %dx%d entries" % (dim, dim))
        m = np.empty((dim, dim), dtype=object)
        for i, row in enumerate(entries):
            for j, v in enumerate(row):
                m[i, j] = rat(v)
        return cls(n, legs, m)

    # -- basic structure ----------------------------------------------

    @property
    def dim(self):
        return self.n**self.legs

    def copy(self):
        return TensorOp(self.n, self.legs, self.mat.copy())

    def nnz(self):
        return int(np.count_nonzero(self.mat != 0))

    def is_zero(self):
        return not (self.mat != 0).any()

    def __eq__(self, other):
        if not isinstance(other, TensorOp):
            return NotImplemented
        return (
            self.n == other.n
            and self.legs == other.legs
            and bool((self.mat == other.mat).all())
        )

    __hash__ = None

    def __repr__(self):
        return "TensorOp(n=%d, legs=%d, nnz=%d)" % (self.n, self.legs, self.nnz())

    # -- ring operations ----------------------------------------------

    def _check_same_shape(self, other):
        if self.n != other.n or self.legs != other.legs:
            raise DimensionError("operand shapes differ")

    def __add__(self, other):
        if not isinstance(other, TensorOp):
            return NotImplemented
        self._check_same_shape(other)
        return TensorOp(self.n, self.legs, self.mat + other.mat)

    def __sub__(self, other):
        if not isinstance(other, TensorOp):
            return NotImplemented
        self._check_same_shape(other)
        return TensorOp(self.n, self.legs, self.mat - other.mat)

    def __neg__(self):
        return TensorOp(self.n, self.legs, -self.mat)

    def __mul__(self, scalar):
        return TensorOp(self.n, self.legs, self.mat * rat(scalar))

    __rmul__ = __mul__

    def row_dicts(self):
        """Sparse view: one {col: value} dict per row."""
        rows = []
        for i in range(self.mat.shape[0]):
            row = self.mat[i]
            rows.append({j: row[j] for j in np.nonzero(row != 0)[0]})
        return rows

    def __matmul__(self, other):
        if not isinstance(other, TensorOp):
            return NotImplemented
        self._check_same_shape(other)
        dim = self.dim
        denom = dim * dim
        if min(self.nnz(), other.nnz()) <= _SPARSE_CUTOFF * denom:
            brows = other.row_dicts()
            out = _zeros(dim)
            amat = self.mat
            for i in range(dim):
                arow = amat[i]
                orow = out[i]
                for j in np.nonzero(arow != 0)[0]:
                    a = arow[j]
                    for k, b in brows[j].items():
                        orow[k] += a * b
            return TensorOp(self.n, self.legs, out)
        return TensorOp(self.n, self.legs, self.mat @ other.mat)

    def trace(self):
        total = ZERO
        for i in range(self.dim):
            total += self.mat[i, i]
        return total

    # -- leg manipulation ----------------------------------------------

    def embed(self, at, total):
        """Place this operator on contiguous legs at..at+legs-1 of `total`."""
        if at < 1 or at + self.legs - 1 > total:
            raise DimensionError(
                "cannot embed %d legs at position %d of %d" % (self.legs, at, total)
            )
        left = self.n ** (at - 1)
        right = self.n ** (total - at - self.legs + 1)
        m = self.mat
        if left > 1:
            m = np.kron(_eye(left), m)
        if right > 1:
            m = np.kron(m, _eye(right))
        return TensorOp(self.n, total, m)

    def shift_up(self, k):
        """Id^(tensor k) (x) self."""
        if k < 0:
            raise InvalidParameterError("shift must be nonnegative")
        if k == 0:
            return self.copy()
        return self.embed(k + 1, self.legs + k)

    def permute_legs(self, perm):
        """Conjugate by the permutation sending leg i to leg perm[i-1]."""
        perm = tuple(perm)
        if sorted(perm) != list(range(1, self.legs + 1)):
            raise InvalidParameterError("not a permutation of 1..%d" % self.legs)
        p0 = [v - 1 for v in perm]
        inv = [0] * self.legs
        for i, v in enumerate(p0):
            inv[v] = i
        axes = inv + [self.legs + v for v in inv]
        n, N = self.n, self.legs
        arr = self.mat.reshape((n,) * (2 * N)).transpose(axes)
        return TensorOp(n, N, arr.reshape(self.dim, self.dim).copy())

    def partial_trace(self, legs):
        """Trace out the given 1-based legs; remaining legs keep their order."""
        traced = sorted(set(legs))
        if any(l < 1 or l > self.legs for l in traced):
            raise DimensionError("legs out of range")
        if not traced:
            return self.copy()
        n, N = self.n, self.legs
        arr = self.mat.reshape((n,) * (2 * N))
        cur = N
        for l in reversed(traced):
            p = l - 1
            arr = np.trace(arr, axis1=p, axis2=cur + p)
            cur -= 1
        dim = n**cur
        return TensorOp(n, cur, np.asarray(arr, dtype=object).reshape(dim, dim).copy())

    # -- serialization --------------------------------------------------

    def to_json_dict(self):
        return {
            "n": self.n,
            "legs": self.legs,
            "entries": [
                [format_rational(v) for v in row] for row in self.mat.tolist()
            ],
        }

    @classmethod
    def from_json_dict(cls, d):
        try:
            n = int(d["n"])
            legs = int(d["legs"])
            entries = d["entries"]
        except (KeyError, TypeError, ValueError) as exc:
            raise InvalidParameterError("malformed operator record") from exc
        dim = n**legs
        if len(entries) != dim or any(len(r) != dim for r in entries):
            raise DimensionError("entry grid is not %dx%d" % (dim, dim))
        m = np.empty((dim, dim), dtype=object)
        for i, row in enumerate(entries):
            for j, s in enumerate(row):
                m[i, j] = parse_rational(s)
        return cls(n, legs, m)

    def dumps(self):
        return json.dumps(self.to_json_dict())

    @classmethod
    def loads(cls, text):
        return cls.from_json_dict(json.loads(text))


def identity(n, legs):
    return TensorOp.identity(n, legs)


def permutation_p(n):
    """The flip P(v (x) w) = w (x) v on two legs."""
    dim = n * n
    m = _zeros(dim)
    for a in range(n):
        for b in range(n):
            m[a * n + b, b * n + a] = ONE
    return TensorOp(n, 2, m)


def kron(a, b):
    """Tensor product; a occupies the leading legs."""
    if a.n != b.n:
        raise DimensionError("local dimensions differ")
    return TensorOp(a.n, a.legs + b.legs, np.kron(a.mat, b.mat))


def rref(mat):
    """Reduced row echelon form of an object ndarray; returns (rref, pivots)."""
    m = mat.copy()
    rows, cols = m.shape
    pivots = []
    r = 0
    for c in range(cols):
        pr = None
        for i in range(r, rows):
            if m[i, c] != 0:
                pr = i
                break
        if pr is None:
            continue
        if pr != r:
            m[[r, pr]] = m[[pr, r]]
        m[r] = m[r] * (ONE / m[r, c])
        for i in range(rows):
            if i != r and m[i, c] != 0:
                m[i] = m[i] - m[i, c] * m[r]
        pivots.append(c)
        r += 1
        if r == rows:
            break
    return m, pivots


def rank(op):
    mat = op.mat if isinstance(op, TensorOp) else op
    return len(rref(mat)[1])


def inverse(op):
    """Exact inverse; raises SingularMatrixError when none exists."""
    dim = op.dim
    aug = np.empty((dim, 2 * dim), dtype=object)
    aug[:, :dim] = op.mat
    aug[:, dim:] = _zeros(dim)
    for i in range(dim):
        aug[i, dim + i] = ONE
    red, pivots = rref(aug)
    if pivots[:dim] != list(range(dim)) or len(pivots) < dim:
        raise SingularMatrixError("operator is not invertible")
    return TensorOp(op.n, op.legs, red[:, dim:].copy())
