"""Free noncommutative algebra over matrix generators and relation ideals.

Generators are the n^2 entries of a formal matrix M.  Polynomials are
finite rational combinations of words in generator ids; matrices over them
mirror the TensorOp protocol (embed, compose, partial_trace), which lets
the weighted-trace machinery treat scalar and noncommutative operators
uniformly.

Ideal membership is plain exact linear algebra: the degree-d component of
the two-sided ideal generated by quadratic relations is spanned by
w1 * r * w2 over monomial pairs, row-reduced once per degree and cached.
Words carry a per-generator-set multidegree; relation rows are homogeneous
in it, so each multidegree sector reduces independently and is built only
when a query touches it.  No Groebner machinery anywhere.
"""

import itertools
from bisect import bisect_right
from collections import Counter

from .errors import DimensionError, CertificationError, InvalidParameterError
from .scalars import ONE, ZERO, rat
from .tensor import TensorOp, basis_tuples, tuple_index

# ---------------------------------------------------------------------------
# generator registry


class GeneratorSet:
    """Contiguous block of generator ids for one formal n x n matrix."""

    def __init__(self, n, tag, base):
        self.n = n
        self.tag = tag
        self.base = base

    def gen_id(self, a, b):
        """Id of the entry in row a, column b (0-based)."""
        return self.base + a * self.n + b

    def ids(self):
        return range(self.base, self.base + self.n * self.n)

    def position(self, gid):
        off = gid - self.base
        return off // self.n, off % self.n

    def name(self, gid):
        a, b = self.position(gid)
        return "%s%d%d" % (self.tag, a + 1, b + 1)


_REGISTRY = []
_BASES = []
_NEXT_BASE = [0]


def new_generator_set(n, tag="M"):
    gs = GeneratorSet(n, tag, _NEXT_BASE[0])
    _NEXT_BASE[0] += n * n
    _REGISTRY.append(gs)
    _BASES.append(gs.base)
    return gs


def generator_set_of(gid):
    i = bisect_right(_BASES, gid) - 1
    if i < 0 or gid >= _BASES[i] + _REGISTRY[i].n ** 2:
        raise InvalidParameterError("unknown generator id %d" % gid)
    return _REGISTRY[i]


def gen_name(gid):
    return generator_set_of(gid).name(gid)


def word_sector(word):
    """Multidegree of a word: counts per generator set, canonically ordered."""
    return tuple(sorted(Counter(generator_set_of(g).base for g in word).items()))


# ---------------------------------------------------------------------------
# polynomials


class NCPoly:
    """Rational linear combination of words in generator ids.

    The term dict maps id-tuples to nonzero coefficients and is never
    mutated after construction; all operations build fresh dicts.
    """

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        self.terms = terms if terms is not None else {}

    @classmethod
    def zero(cls):
        return cls({})

    @classmethod
    def constant(cls, c):
        cv = rat(c)
        return cls({(): cv} if cv != 0 else {})

    @classmethod
    def gen(cls, gid):
        return cls({(gid,): ONE})

    def is_zero(self):
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def degree(self):
        """Common word length, or None for the zero polynomial."""
        lens = {len(w) for w in self.terms}
        if not lens:
            return None
        if len(lens) > 1:
            raise InvalidParameterError("polynomial is not homogeneous")
        return lens.pop()

    def __eq__(self, other):
        if not isinstance(other, NCPoly):
            return NotImplemented
        return self.terms == other.terms

    __hash__ = None

    def __add__(self, other):
        if not isinstance(other, NCPoly):
            return NotImplemented
        out = dict(self.terms)
        for w, c in other.terms.items():
            if w in out:
                v = out[w] + c
                if v:
                    out[w] = v
                else:
                    del out[w]
            else:
                out[w] = c
        return NCPoly(out)

    def __sub__(self, other):
        if not isinstance(other, NCPoly):
            return NotImplemented
        out = dict(self.terms)
        for w, c in other.terms.items():
            if w in out:
                v = out[w] - c
                if v:
                    out[w] = v
                else:
                    del out[w]
            else:
                out[w] = -c
        return NCPoly(out)

    def __neg__(self):
        return NCPoly({w: -c for w, c in self.terms.items()})

    def scale(self, c):
        cv = rat(c)
        if cv == 0:
            return NCPoly()
        return NCPoly({w: cv * v for w, v in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, NCPoly):
            out = {}
            for w1, c1 in self.terms.items():
                for w2, c2 in other.terms.items():
                    w = w1 + w2
                    if w in out:
                        v = out[w] + c1 * c2
                        if v:
                            out[w] = v
                        else:
                            del out[w]
                    else:
                        out[w] = c1 * c2
            return NCPoly(out)
        return self.scale(other)

    def __rmul__(self, other):
        return self.scale(other)

    def substitute(self, values):
        """Evaluate with generator values from a dict; missing ids error out."""
        total = ZERO
        for w, c in self.terms.items():
            v = c
            for g in w:
                v = v * values[g]
                if v == 0:
                    break
            total += v
        return total

    def specialize_scalar(self, c):
        """Evaluate under the substitution M -> c * Id for every generator set."""
        cv = rat(c)
        total = ZERO
        for w, coeff in self.terms.items():
            diag = True
            for g in w:
                a, b = generator_set_of(g).position(g)
                if a != b:
                    diag = False
                    break
            if diag:
                total += coeff * cv ** len(w)
        return total

    def sorted_terms(self):
        return sorted(self.terms.items(), reverse=True)

    def __repr__(self):
        if not self.terms:
            return "0"
        bits = []
        for w, c in self.sorted_terms():
            word = "*".join(gen_name(g) for g in w) if w else "1"
            bits.append("%s*%s" % (c, word) if c != 1 or not w else word)
        return " + ".join(bits)


# ---------------------------------------------------------------------------
# matrices with noncommutative entries


class NCMatrix:
    """Matrix over NCPoly on V^(tensor legs), sparse dict-of-rows storage."""

    __slots__ = ("n", "legs", "rows", "genset")

    def __init__(self, n, legs, rows=None, genset=None):
        self.n = n
        self.legs = legs
        dim = n**legs
        self.rows = rows if rows is not None else [{} for _ in range(dim)]
        if len(self.rows) != dim:
            raise DimensionError("row count does not match leg count")
        self.genset = genset

    @classmethod
    def zeros(cls, n, legs):
        return cls(n, legs)

    @classmethod
    def from_tensor_op(cls, op, scale=None):
        """Scalar matrix lifted entrywise; optionally times a fixed polynomial."""
        out = cls(op.n, op.legs)
        for i, row in enumerate(op.row_dicts()):
            orow = out.rows[i]
            for j, v in row.items():
                orow[j] = scale.scale(v) if scale is not None else NCPoly.constant(v)
        return out

    @property
    def dim(self):
        return self.n**self.legs

    def copy(self):
        return NCMatrix(self.n, self.legs, [dict(r) for r in self.rows], self.genset)

    def entry(self, i, j):
        return self.rows[i].get(j, NCPoly())

    def entries(self):
        for i, row in enumerate(self.rows):
            for j in sorted(row):
                yield i, j, row[j]

    def is_zero(self):
        return all(not r for r in self.rows)

    def __eq__(self, other):
        if not isinstance(other, NCMatrix):
            return NotImplemented
        return self.n == other.n and self.legs == other.legs and self.rows == other.rows

    __hash__ = None

    def _check_same_shape(self, other):
        if self.n != other.n or self.legs != other.legs:
            raise DimensionError("operand shapes differ")

    def __add__(self, other):
        if not isinstance(other, NCMatrix):
            return NotImplemented
        self._check_same_shape(other)
        out = self.copy()
        for i, row in enumerate(other.rows):
            orow = out.rows[i]
            for j, p in row.items():
                cur = orow.get(j)
                s = p if cur is None else cur + p
                if s:
                    orow[j] = s
                else:
                    orow.pop(j, None)
        return out

    def __sub__(self, other):
        if not isinstance(other, NCMatrix):
            return NotImplemented
        return self + (-other)

    def __neg__(self):
        return NCMatrix(
            self.n,
            self.legs,
            [{j: -p for j, p in row.items()} for row in self.rows],
            self.genset,
        )

    def scale(self, c):
        cv = rat(c)
        if cv == 0:
            return NCMatrix.zeros(self.n, self.legs)
        return NCMatrix(
            self.n,
            self.legs,
            [{j: p.scale(cv) for j, p in row.items()} for row in self.rows],
            self.genset,
        )

    __rmul__ = scale
    __mul__ = scale

    def right_mul_poly(self, poly):
        """Entrywise product with a fixed polynomial on the right."""
        out = NCMatrix.zeros(self.n, self.legs)
        for i, row in enumerate(self.rows):
            orow = out.rows[i]
            for j, p in row.items():
                v = p * poly
                if v:
                    orow[j] = v
        return out

    def left_mul_poly(self, poly):
        out = NCMatrix.zeros(self.n, self.legs)
        for i, row in enumerate(self.rows):
            orow = out.rows[i]
            for j, p in row.items():
                v = poly * p
                if v:
                    orow[j] = v
        return out

    @staticmethod
    def _acc(row, k, p):
        cur = row.get(k)
        if cur is None:
            if p:
                row[k] = p
            return
        s = cur + p
        if s:
            row[k] = s
        else:
            del row[k]

    def __matmul__(self, other):
        if isinstance(other, NCMatrix):
            self._check_same_shape(other)
            out = NCMatrix.zeros(self.n, self.legs)
            for i, arow in enumerate(self.rows):
                orow = out.rows[i]
                for j, p in arow.items():
                    for k, q in other.rows[j].items():
                        self._acc(orow, k, p * q)
            return out
        if isinstance(other, TensorOp):
            if self.n != other.n or self.legs != other.legs:
                raise DimensionError("operand shapes differ")
            srows = other.row_dicts()
            out = NCMatrix.zeros(self.n, self.legs)
            for i, arow in enumerate(self.rows):
                orow = out.rows[i]
                for j, p in arow.items():
                    for k, v in srows[j].items():
                        self._acc(orow, k, p.scale(v))
            return out
        return NotImplemented

    def __rmatmul__(self, other):
        if not isinstance(other, TensorOp):
            return NotImplemented
        if self.n != other.n or self.legs != other.legs:
            raise DimensionError("operand shapes differ")
        srows = other.row_dicts()
        out = NCMatrix.zeros(self.n, self.legs)
        for i, srow in enumerate(srows):
            orow = out.rows[i]
            for j, v in srow.items():
                for k, p in self.rows[j].items():
                    self._acc(orow, k, p.scale(v))
        return out

    def embed(self, at, total):
        if at < 1 or at + self.legs - 1 > total:
            raise DimensionError("cannot embed %d legs at %d of %d" % (self.legs, at, total))
        n = self.n
        d_self = n**self.legs
        d_left = n ** (at - 1)
        d_right = n ** (total - at - self.legs + 1)
        out = NCMatrix.zeros(n, total)
        for i, row in enumerate(self.rows):
            for j, p in row.items():
                for l in range(d_left):
                    base = l * d_self * d_right
                    for r in range(d_right):
                        out.rows[base + i * d_right + r][base + j * d_right + r] = p
        out.genset = self.genset
        return out

    def partial_trace(self, legs):
        traced = sorted(set(legs))
        if any(l < 1 or l > self.legs for l in traced):
            raise DimensionError("legs out of range")
        if not traced:
            return self.copy()
        n, N = self.n, self.legs
        tups = basis_tuples(n, N)
        tpos = [l - 1 for l in traced]
        kpos = [p for p in range(N) if p not in tpos]
        tpart = [tuple(t[p] for p in tpos) for t in tups]
        kidx = [tuple_index(tuple(t[p] for p in kpos), n) for t in tups]
        out = NCMatrix.zeros(n, N - len(tpos))
        for i, row in enumerate(self.rows):
            ti = tpart[i]
            orow = out.rows[kidx[i]]
            for j, p in row.items():
                if tpart[j] == ti:
                    self._acc(orow, kidx[j], p)
        return out

    def scalar(self):
        """The single entry of a 0-leg matrix."""
        if self.legs != 0:
            raise DimensionError("scalar() needs a fully traced matrix")
        return self.rows[0].get(0, NCPoly())

    def substitute(self, values):
        """Entrywise numeric evaluation to a TensorOp."""
        out = TensorOp.zeros(self.n, self.legs)
        for i, row in enumerate(self.rows):
            for j, p in row.items():
                out.mat[i, j] = p.substitute(values)
        return out

    def specialize_scalar(self, c):
        out = TensorOp.zeros(self.n, self.legs)
        for i, row in enumerate(self.rows):
            for j, p in row.items():
                out.mat[i, j] = p.specialize_scalar(c)
        return out


def generic_hq_matrix(n, tag="M"):
    """Fresh formal n x n matrix with its own generator block."""
    gs = new_generator_set(n, tag)
    out = NCMatrix(n, 1, genset=gs)
    for a in range(n):
        for b in range(n):
            out.rows[a][b] = NCPoly.gen(gs.gen_id(a, b))
    return out


# ---------------------------------------------------------------------------
# conjugated copies and relation sets


def mbar(pair, m, k, width):
    """k-th conjugated copy: leg-1 embedding pushed up by F conjugations."""
    if not 1 <= k <= width:
        raise InvalidParameterError("need 1 <= k <= width")
    if m.legs != 1:
        raise DimensionError("mbar starts from a 1-leg matrix")
    out = m.embed(1, width)
    for j in range(1, k):
        fj = pair.f.embed(j, width)
        fj_inv = pair.f_inv.embed(j, width)
        out = fj @ out @ fj_inv
    return out


def mbar_product(pair, m, l, k, width):
    """Ordered product of conjugated copies l..k; empty when l > k."""
    out = None
    for j in range(l, k + 1):
        factor = mbar(pair, m, j, width)
        out = factor if out is None else out @ factor
    if out is None:
        out = NCMatrix.from_tensor_op(TensorOp.identity(pair.n, width))
    return out


def relations(pair, m):
    """Quadratic relation set: entries of S2 Mbar1 Mbar2 A2, deduplicated."""
    pair.require_certified()
    prod = mbar(pair, m, 1, 2) @ mbar(pair, m, 2, 2)
    mat = pair.s2 @ prod @ pair.a2
    ech = WordEchelon()
    for _, _, p in mat.entries():
        if p:
            ech.insert(p.terms)
    return ech.row_polys()


def full_qm_relations(pair, m):
    """Entries of R Mbar1 Mbar2 - Mbar1 Mbar2 R, deduplicated."""
    pair.require_certified()
    prod = mbar(pair, m, 1, 2) @ mbar(pair, m, 2, 2)
    mat = (pair.r @ prod) - (prod @ pair.r)
    ech = WordEchelon()
    for _, _, p in mat.entries():
        if p:
            ech.insert(p.terms)
    return ech.row_polys()


# ---------------------------------------------------------------------------
# exact sparse row reduction over words


class WordEchelon:
    """Incremental echelon basis of homogeneous word vectors.

    Words compare as tuples; the leading word of a vector is its maximum.
    Stored rows are monic in their pivot and fully reduced at insert time;
    chains through later pivots resolve during reduce().
    """

    def __init__(self):
        self.pivots = {}

    def reduce(self, terms):
        out = {}
        work = dict(terms)
        while work:
            w = max(work)
            c = work.pop(w)
            if not c:
                continue
            row = self.pivots.get(w)
            if row is None:
                out[w] = c
                continue
            for rw, rc in row.items():
                if rw == w:
                    continue
                v = work.get(rw, ZERO) - c * rc
                if v:
                    work[rw] = v
                else:
                    work.pop(rw, None)
        return out

    def insert(self, terms):
        red = self.reduce(terms)
        if not red:
            return False
        lead = max(red)
        inv = ONE / red[lead]
        self.pivots[lead] = {w: c * inv for w, c in red.items()}
        return True

    @property
    def rank(self):
        return len(self.pivots)

    def row_polys(self):
        return [NCPoly(dict(self.pivots[w])) for w in sorted(self.pivots, reverse=True)]


def span_equal(polys_a, polys_b):
    """Exact row-space equality of two lists of homogeneous polynomials."""
    ea, eb, eu = WordEchelon(), WordEchelon(), WordEchelon()
    for p in polys_a:
        ea.insert(p.terms)
        eu.insert(p.terms)
    for p in polys_b:
        eb.insert(p.terms)
        eu.insert(p.terms)
    return ea.rank == eb.rank == eu.rank


# ---------------------------------------------------------------------------
# ideal degree components


_SPOT_CHECK_VALUE = rat(5, 7)


class IdealDegreeBasis:
    """Row space of the degree-d component of the two-sided ideal.

    Rows are w1 * r * w2 with |w1| + 2 + |w2| = d.  Every relation is
    homogeneous in the per-generator-set multidegree, so the component
    splits into independent sectors; each sector's echelon is built on
    first use.
    """

    def __init__(self, rels, degree, alphabet=None):
        if degree < 2:
            raise InvalidParameterError("ideal components start at degree 2")
        self.rels = []
        for r in rels:
            if r.is_zero():
                continue
            if r.degree() != 2:
                raise InvalidParameterError("relations must be homogeneous quadratics")
            self.rels.append(r)
        self.degree = degree
        if alphabet is None:
            seen = set()
            for r in self.rels:
                for w in r.terms:
                    seen.update(w)
            alphabet = sorted(seen)
        self.alphabet = tuple(sorted(alphabet))
        self._sectors = {}
        self._rel_sectors = [word_sector(next(iter(r.terms))) for r in self.rels]

    def _sector_union(self, *counters):
        total = Counter()
        for c in counters:
            total.update(dict(c))
        return tuple(sorted(total.items()))

    def all_sectors(self):
        """Every multidegree sector the generators can reach at this degree."""
        if not self.rels:
            return set()
        out = set()
        d = self.degree - 2
        base_counts = Counter(generator_set_of(g).base for g in self.alphabet)
        bases = sorted(base_counts)
        for combo in itertools.combinations_with_replacement(bases, d):
            wsec = tuple(sorted(Counter(combo).items()))
            for rs in self._rel_sectors:
                out.add(self._sector_union(wsec, rs))
        return out

    def _echelon(self, sector):
        ech = self._sectors.get(sector)
        if ech is not None:
            return ech
        ech = WordEchelon()
        d = self.degree - 2
        for l1 in range(d + 1):
            for w1 in itertools.product(self.alphabet, repeat=l1):
                s1 = word_sector(w1)
                for w2 in itertools.product(self.alphabet, repeat=d - l1):
                    s12 = self._sector_union(s1, word_sector(w2))
                    for rel, rs in zip(self.rels, self._rel_sectors):
                        if self._sector_union(s12, rs) != sector:
                            continue
                        ech.insert({w1 + w + w2: c for w, c in rel.terms.items()})
        self._sectors[sector] = ech
        return ech

    def reduce(self, poly):
        """Canonical normal form of poly modulo this degree component."""
        if poly.is_zero():
            return NCPoly()
        if poly.degree() != self.degree:
            raise InvalidParameterError(
                "polynomial degree %s does not match component degree %d"
                % (poly.degree(), self.degree)
            )
        by_sector = {}
        for w, c in poly.terms.items():
            by_sector.setdefault(word_sector(w), {})[w] = c
        out = {}
        for sector, part in sorted(by_sector.items()):
            out.update(self._echelon(sector).reduce(part))
        return NCPoly(out)

    def rank(self):
        total = 0
        for sector in sorted(self.all_sectors()):
            total += self._echelon(sector).rank
        return total

    def word_space_dim(self):
        return len(self.alphabet) ** self.degree


def ideal_degree_basis(rels, degree, alphabet=None):
    return IdealDegreeBasis(rels, degree, alphabet)


def is_in_ideal(poly, basis):
    """Membership plus canonical residual; members are spot-checked."""
    if poly.is_zero():
        return True, NCPoly()
    residual = basis.reduce(poly)
    member = residual.is_zero()
    if member and poly.specialize_scalar(_SPOT_CHECK_VALUE) != 0:
        raise CertificationError(
            "claimed ideal member fails the scalar specialization check"
        )
    return member, residual


class RelationIdeal:
    """Two-sided ideal of quadratic relations with cached degree components."""

    def __init__(self, rels, alphabet):
        self.rels = list(rels)
        self.alphabet = tuple(sorted(alphabet))
        self._bases = {}

    def degree_basis(self, d):
        if d not in self._bases:
            self._bases[d] = IdealDegreeBasis(self.rels, d, self.alphabet)
        return self._bases[d]

    def reduce(self, poly):
        if poly.is_zero():
            return NCPoly()
        d = poly.degree()
        if d < 2:
            return NCPoly(dict(poly.terms))
        return self.degree_basis(d).reduce(poly)

    def contains(self, poly):
        if poly.is_zero():
            return True
        d = poly.degree()
        if d < 2:
            return False
        return is_in_ideal(poly, self.degree_basis(d))[0]

    def matrix_residual_rank(self, mat):
        """Number of entries that fail membership."""
        bad = 0
        for _, _, p in mat.entries():
            if not self.contains(p):
                bad += 1
        return bad


def hq_ideal(pair, m):
    """The relation ideal of one generic half-quantum matrix."""
    return RelationIdeal(relations(pair, m), m.genset.ids())


def full_qm_ideal(pair, m):
    return RelationIdeal(full_qm_relations(pair, m), m.genset.ids())


def empty_ideal(m):
    """No relations at all; membership holds only for zero."""
    return RelationIdeal([], m.genset.ids())


# ---------------------------------------------------------------------------
# free-algebra identities (no ideal involved)


def _r_word(pair, letters, width):
    out = TensorOp.identity(pair.n, width)
    for a in letters:
        out = out @ pair.r.embed(a, width)
    return out


def lemma1_report(pair, m, max_width):
    """Exact free-algebra identities for conjugated copies, by name."""
    if max_width < 2:
        raise InvalidParameterError("need width >= 2")
    results = []
    mbar_cache = {}

    def mb(k, width):
        key = (k, width)
        if key not in mbar_cache:
            mbar_cache[key] = mbar(pair, m, k, width)
        return mbar_cache[key]

    def mprod(l, k, width):
        out = None
        for j in range(l, k + 1):
            out = mb(j, width) if out is None else out @ mb(j, width)
        return out

    # distant copies commute with both braidings
    for i in range(1, max_width):
        for k in range(1, max_width + 1):
            if k in (i, i + 1):
                continue
            width = max(i + 1, k)
            mk = mb(k, width)
            for label, op in (("f", pair.f), ("r", pair.r)):
                oi = op.embed(i, width)
                ok = (oi @ mk) == (mk @ oi)
                results.append(("distant-commutation[%s,i=%d,k=%d]" % (label, i, k), ok))

    # chains of F factors shift a block of copies up by one
    for k in range(1, max_width):
        for i in range(1, k + 1):
            width = k + 1
            chain = TensorOp.identity(pair.n, width)
            for j in range(i, k + 1):
                chain = chain @ pair.f.embed(j, width)
            lhs = chain @ mprod(i, k, width)
            rhs = mprod(i + 1, k + 1, width) @ chain
            results.append(("conjugation-shift[i=%d,k=%d]" % (i, k), lhs == rhs))

    # traced blocks reduce to the identity times a scalar coefficient
    for k in range(1, max_width):
        for i in range(1, max_width - k + 1):
            width = i + k
            y_letters = [()]
            y_letters += [(a,) for a in range(1, k)]
            y_letters += list(itertools.product(range(1, k), repeat=2))
            for letters in y_letters:
                y_small = _r_word(pair, letters, k)
                alpha = pair.f_trace_full(y_small @ mprod(1, k, k)).scalar()
                y_up = y_small.embed(i + 1, width)
                lhs = pair.f_trace(y_up @ mprod(i + 1, i + k, width), range(i + 1, width + 1))
                rhs = NCMatrix.from_tensor_op(TensorOp.identity(pair.n, i), scale=alpha)
                results.append(
                    ("partial-trace-reduction[i=%d,k=%d,y=%s]" % (i, k, letters), lhs == rhs)
                )
    return results


def check_lemma1(pair, m, max_width):
    return all(ok for _, ok in lemma1_report(pair, m, max_width))


def equivalent_forms_report(pair, m):
    """Four single-sided forms generate the same quadratic span as relations."""
    pair.require_certified()
    qv = rat(pair.q)
    prod = mbar(pair, m, 1, 2) @ mbar(pair, m, 2, 2)
    s2, a2, r = pair.s2, pair.a2, pair.r
    base = s2 @ prod @ a2
    forms = [
        ("antisym-eigen-left", (r @ prod @ a2) + (1 / qv) * (prod @ a2)),
        ("sym-eigen-right", (s2 @ prod @ r) - qv * (s2 @ prod)),
        ("antisym-absorb", (a2 @ prod @ a2) - (prod @ a2)),
        ("sym-absorb", (s2 @ prod @ s2) - (s2 @ prod)),
    ]
    base_polys = [p for _, _, p in base.entries()]
    out = []
    for name, mat in forms:
        polys = [p for _, _, p in mat.entries()]
        out.append((name, span_equal(base_polys, polys)))
    return out


def check_equivalent_forms(pair, m):
    return all(ok for _, ok in equivalent_forms_report(pair, m))


def projector_relations_report(pair, m, k, i, ideal=None):
    """Projector sandwich identities, verified as ideal membership."""
    pair.require_certified()
    if k < 2 or i < 0:
        raise InvalidParameterError("need k >= 2 and i >= 0")
    if ideal is None:
        ideal = hq_ideal(pair, m)
    results = []

    j = i + 1
    width = j + 1
    pairprod = mbar(pair, m, j, width) @ mbar(pair, m, j + 1, width)
    l3 = pair.s2.embed(j, width) @ pairprod @ pair.a2.embed(j, width)
    results.append(
        ("adjacent-pair-relation[j=%d]" % j, ideal.matrix_residual_rank(l3) == 0)
    )

    width = i + k
    block = mbar_product(pair, m, i + 1, i + k, width)
    for name, proj in (
        ("antisym-sandwich", pair.antisymmetrizer(k)),
        ("sym-sandwich", pair.symmetrizer(k)),
    ):
        pemb = proj.embed(i + 1, width)
        if name == "antisym-sandwich":
            resid = (pemb @ block @ pemb) - (block @ pemb)
        else:
            resid = (pemb @ block @ pemb) - (pemb @ block)
        ok = ideal.matrix_residual_rank(resid) == 0
        results.append(("%s[k=%d,i=%d]" % (name, k, i), ok))
    return results


def check_projector_relations(pair, m, k, i, ideal=None):
    return all(ok for _, ok in projector_relations_report(pair, m, k, i, ideal))


# ---------------------------------------------------------------------------
# braided product of two copies


def braided_cross_relations(pair, m, mp):
    """Entries of Mbar2 Mp1 - Mp1 Mbar2, deduplicated."""
    mbar2 = mbar(pair, m, 2, 2)
    mp1 = mp.embed(1, 2)
    mat = (mbar2 @ mp1) - (mp1 @ mbar2)
    ech = WordEchelon()
    for _, _, p in mat.entries():
        if p:
            ech.insert(p.terms)
    return ech.row_polys()


def braided_product_relations(pair, m, mp):
    """Relations of both copies plus the mixed commutation relations."""
    if set(m.genset.ids()) & set(mp.genset.ids()):
        raise InvalidParameterError("copies must use disjoint generator sets")
    return relations(pair, m) + relations(pair, mp) + braided_cross_relations(pair, m, mp)


def check_braided_closure(pair, include_cross=True):
    """The entrywise product of two braided copies satisfies the relations."""
    pair.require_certified()
    n = pair.n
    m = generic_hq_matrix(n, "M")
    mp = generic_hq_matrix(n, "Mp")
    rels = relations(pair, m) + relations(pair, mp)
    if include_cross:
        rels += braided_cross_relations(pair, m, mp)
    alphabet = list(m.genset.ids()) + list(mp.genset.ids())
    ideal = RelationIdeal(rels, alphabet)
    prod = m @ mp
    p1 = prod.embed(1, 2)
    p2 = pair.f @ p1 @ pair.f_inv
    target = pair.s2 @ (p1 @ p2) @ pair.a2
    return ideal.matrix_residual_rank(target) == 0
