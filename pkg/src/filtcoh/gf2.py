"""Deterministic sparse/dense linear algebra over the two-element field.

Vectors are Python ints used as bitsets: bit ``j`` is coordinate ``j``.
All echelon forms pick the lowest-index available column as pivot, so every
basis produced here is the canonical reduced row echelon basis of its span
and is reproducible bit-for-bit across runs.
"""

from __future__ import annotations

from typing import Callable, Iterable, Optional, Sequence


def _lsb(x: int) -> int:
    """Index of the lowest set bit (x must be nonzero)."""
    return (x & -x).bit_length() - 1


def _rref(vectors: Iterable[int]) -> tuple[int, ...]:
    """Canonical reduced row echelon basis of the span of ``vectors``."""
    rows: dict[int, int] = {}  # pivot -> row
    for v in vectors:
        while v:
            p = _lsb(v)
            if p in rows:
                v ^= rows[p]
            else:
                break
        if not v:
            continue
        p = _lsb(v)
        for q in rows:
            if q > p and (v >> q) & 1:
                v ^= rows[q]
        for q, w in rows.items():
            if (w >> p) & 1:
                rows[q] = w ^ v
        rows[p] = v
    return tuple(rows[p] for p in sorted(rows))


class BitMatrix:
    """Matrix over GF(2); row ``i`` is an int whose bit ``j`` is entry (i, j)."""

    __slots__ = ("rows", "cols", "_rows")

    def __init__(self, rows: int, cols: int, row_bits: Optional[Sequence[int]] = None):
        if rows < 0 or cols < 0:
            raise ValueError("matrix dimensions must be nonnegative")
        self.rows = rows
        self.cols = cols
        data = list(row_bits) if row_bits is not None else [0] * rows
        if len(data) != rows:
            raise ValueError("row count mismatch")
        mask = (1 << cols) - 1
        for r in data:
            if r & ~mask:
                raise ValueError("entry position out of bounds")
        self._rows = data

    @classmethod
    def from_entries(cls, rows: int, cols: int, entries: Iterable[tuple[int, int]]) -> "BitMatrix":
        data = [0] * rows
        seen = set()
        for i, j in entries:
            if not (0 <= i < rows and 0 <= j < cols):
                raise ValueError(f"entry position ({i}, {j}) out of bounds")
            if (i, j) in seen:
                raise ValueError(f"duplicate entry position ({i}, {j})")
            seen.add((i, j))
            data[i] |= 1 << j
        return cls(rows, cols, data)

    @classmethod
    def from_columns(cls, rows: int, columns: Sequence[int]) -> "BitMatrix":
        data = [0] * rows
        for j, col in enumerate(columns):
            if col >> rows:
                raise ValueError("column vector out of bounds")
            while col:
                i = _lsb(col)
                col &= col - 1
                data[i] |= 1 << j
        return cls(rows, len(columns), data)

    @classmethod
    def identity(cls, n: int) -> "BitMatrix":
        return cls(n, n, [1 << i for i in range(n)])

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "BitMatrix":
        return cls(rows, cols)

    def row(self, i: int) -> int:
        return self._rows[i]

    def entry(self, i: int, j: int) -> int:
        return (self._rows[i] >> j) & 1

    def entries(self) -> tuple[tuple[int, int], ...]:
        out = []
        for i, r in enumerate(self._rows):
            while r:
                j = _lsb(r)
                r &= r - 1
                out.append((i, j))
        return tuple(out)

    def column(self, j: int) -> int:
        v = 0
        for i, r in enumerate(self._rows):
            v |= ((r >> j) & 1) << i
        return v

    def transpose(self) -> "BitMatrix":
        data = [0] * self.cols
        for i, r in enumerate(self._rows):
            while r:
                j = _lsb(r)
                r &= r - 1
                data[j] |= 1 << i
        return BitMatrix(self.cols, self.rows, data)

    def apply(self, v: int) -> int:
        """Matrix-vector product M v; ``v`` over columns, result over rows."""
        out = 0
        for i, r in enumerate(self._rows):
            if (r & v).bit_count() & 1:
                out |= 1 << i
        return out

    def __matmul__(self, other: "BitMatrix") -> "BitMatrix":
        if self.cols != other.rows:
            raise ValueError("shape mismatch in matrix product")
        data = []
        for r in self._rows:
            acc = 0
            rr = r
            while rr:
                k = _lsb(rr)
                rr &= rr - 1
                acc ^= other._rows[k]
            data.append(acc)
        return BitMatrix(self.rows, other.cols, data)

    def __add__(self, other: "BitMatrix") -> "BitMatrix":
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise ValueError("shape mismatch in matrix sum")
        return BitMatrix(self.rows, self.cols, [a ^ b for a, b in zip(self._rows, other._rows)])

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, BitMatrix)
            and self.rows == other.rows
            and self.cols == other.cols
            and self._rows == other._rows
        )

    def __hash__(self):
        return hash((self.rows, self.cols, tuple(self._rows)))

    def is_zero(self) -> bool:
        return not any(self._rows)

    def rank(self) -> int:
        return len(_rref(self._rows))

    def kernel_basis(self) -> "Subspace":
        """Canonical basis of the right kernel {v : M v = 0}."""
        rref_rows = _rref(self._rows)
        pivots = [_lsb(r) for r in rref_rows]
        pivot_set = set(pivots)
        vecs = []
        for f in range(self.cols):
            if f in pivot_set:
                continue
            v = 1 << f
            for r in rref_rows:
                if (r >> f) & 1:
                    v |= 1 << _lsb(r)
            vecs.append(v)
        return Subspace.from_vectors(self.cols, vecs)

    def __repr__(self):
        return f"BitMatrix({self.rows}x{self.cols}, {len(self.entries())} ones)"


def rank(m: BitMatrix) -> int:
    return m.rank()


def kernel_basis(m: BitMatrix) -> "Subspace":
    return m.kernel_basis()


class Subspace:
    """Subspace of GF(2)^n held as a canonical RREF basis.

    Invariants: basis vectors nonzero, pivots (lowest set bits) strictly
    increasing, and no vector has a 1 in another vector's pivot column.
    """

    __slots__ = ("ambient_dim", "basis")

    def __init__(self, ambient_dim: int, basis: tuple[int, ...]):
        if ambient_dim < 0:
            raise ValueError("ambient dimension must be nonnegative")
        last_pivot = -1
        pivots = []
        for v in basis:
            if v == 0 or v >> ambient_dim:
                raise ValueError("basis vector zero or out of bounds")
            p = _lsb(v)
            if p <= last_pivot:
                raise ValueError("pivots not strictly increasing")
            last_pivot = p
            pivots.append(p)
        for v in basis:
            for p, w in zip(pivots, basis):
                if v is not w and (v >> p) & 1:
                    raise ValueError("basis not fully reduced")
        self.ambient_dim = ambient_dim
        self.basis = tuple(basis)

    @classmethod
    def from_vectors(cls, ambient_dim: int, vectors: Iterable[int]) -> "Subspace":
        return cls(ambient_dim, _rref(vectors))

    @classmethod
    def zero(cls, ambient_dim: int) -> "Subspace":
        return cls(ambient_dim, ())

    @classmethod
    def full(cls, ambient_dim: int) -> "Subspace":
        return cls(ambient_dim, tuple(1 << i for i in range(ambient_dim)))

    @property
    def dim(self) -> int:
        return len(self.basis)

    def reduce(self, v: int) -> int:
        """Canonical representative of v modulo this subspace (linear in v)."""
        for b in self.basis:
            if (v >> _lsb(b)) & 1:
                v ^= b
        return v

    def contains(self, v: int) -> bool:
        return self.reduce(v) == 0

    def contains_subspace(self, other: "Subspace") -> bool:
        return all(self.contains(b) for b in other.basis)

    def __add__(self, other: "Subspace") -> "Subspace":
        if self.ambient_dim != other.ambient_dim:
            raise ValueError("ambient dimension mismatch")
        return Subspace.from_vectors(self.ambient_dim, self.basis + other.basis)

    def add_vector(self, v: int) -> "Subspace":
        return Subspace.from_vectors(self.ambient_dim, self.basis + (v,))

    def intersection(self, other: "Subspace") -> "Subspace":
        if self.ambient_dim != other.ambient_dim:
            raise ValueError("ambient dimension mismatch")
        if self.dim == 0 or other.dim == 0:
            return Subspace.zero(self.ambient_dim)
        cols = self.basis + other.basis
        m = BitMatrix.from_columns(self.ambient_dim, cols)
        vecs = []
        for c in m.kernel_basis().basis:
            x = 0
            cc = c
            while cc:
                i = _lsb(cc)
                cc &= cc - 1
                if i < len(self.basis):
                    x ^= self.basis[i]
            vecs.append(x)
        return Subspace.from_vectors(self.ambient_dim, vecs)

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, Subspace)
            and self.ambient_dim == other.ambient_dim
            and self.basis == other.basis
        )

    def __hash__(self):
        return hash((self.ambient_dim, self.basis))

    def __repr__(self):
        return f"Subspace(dim {self.dim} of GF(2)^{self.ambient_dim})"


def span_solve(generators: Sequence[int], v: int) -> Optional[int]:
    """Coefficient bitmask c with XOR_{i in c} generators[i] = v, or None.

    Deterministic: reduces against generators in order, eliminating with the
    earliest generator available for each pivot.
    """
    rows: dict[int, tuple[int, int]] = {}  # pivot -> (vector, combo mask)
    for i, g in enumerate(generators):
        combo = 1 << i
        while g:
            p = _lsb(g)
            if p in rows:
                w, c = rows[p]
                g ^= w
                combo ^= c
            else:
                rows[p] = (g, combo)
                break
    combo = 0
    while v:
        p = _lsb(v)
        if p not in rows:
            return None
        w, c = rows[p]
        v ^= w
        combo ^= c
    return combo


def combine(generators: Sequence[int], combo: int) -> int:
    """XOR of the generators selected by the bitmask ``combo``."""
    x = 0
    while combo:
        i = _lsb(combo)
        combo &= combo - 1
        x ^= generators[i]
    return x


def preimage(apply_fn: Callable[[int], int], a: "Subspace", b: "Subspace") -> "Subspace":
    """{x in A : f(x) in B} for a linear f given by ``apply_fn``."""
    if a.dim == 0:
        return a
    cols = [b.reduce(apply_fn(v)) for v in a.basis]
    m = BitMatrix.from_columns(b.ambient_dim, cols)
    vecs = []
    for c in m.kernel_basis().basis:
        vecs.append(combine(a.basis, c))
    return Subspace.from_vectors(a.ambient_dim, vecs)


def image(apply_fn: Callable[[int], int], a: "Subspace", target_dim: int) -> "Subspace":
    """f(A) as a subspace of GF(2)^target_dim."""
    return Subspace.from_vectors(target_dim, [apply_fn(v) for v in a.basis])


def subquotient(a: Subspace, b: Subspace) -> tuple[int, tuple[int, ...]]:
    """dim A/(A cap B) together with coset representatives drawn from A.

    Representatives are the canonical-basis vectors of A that are independent
    modulo A cap B, taken in pivot order.
    """
    if a.ambient_dim != b.ambient_dim:
        raise ValueError("ambient dimension mismatch")
    cur = a.intersection(b)
    reps = []
    for v in a.basis:
        if not cur.contains(v):
            reps.append(v)
            cur = cur.add_vector(v)
    return len(reps), tuple(reps)


def subquotient_dim(a: Subspace, b: Subspace) -> int:
    return subquotient(a, b)[0]
