"""Spectral sequence of the action filtration.

The filtration of the Z_Sigma-graded complex by grade levels F_n (grades
>= n within the residue class of n) is bounded, and its pages are computed
two independent ways:

* ``page`` runs the recursion: E^1 is the cohomology of the associated
  graded, and E^{k+1} = H(E^k, d^k) is computed literally as kernels modulo
  images of the induced differential matrices. Each page cell keeps coset
  representatives that are "deep": delta of a stage-k representative lands
  in F_{n + k*Sigma + 1}, which is what makes d^k computable on
  representatives; after each homology step the new representatives are
  repaired back into deep position by a correction drawn from the
  denominator.

* ``page_oracle`` evaluates the closed subquotient description directly:

      Z^k(n) = { x in F_n : delta x in F_{n + k*Sigma + 1} }
      E^k(n) = Z^k(n) / ( Z^{k-1}(n + Sigma) + delta Z^{k-1}(n - (k-1)*Sigma - 1) )

  using only the GF(2) core, with no recursion between pages.

The differential d^k raises the integer grade by k*Sigma + 1 and the residue
class by 1. Pages are reported per cell (n, j) with n = j (mod Sigma); cells
at unoccupied grades are zero and omitted.
"""

from __future__ import annotations

from dataclasses import dataclass

from .complexes import FilteredComplex
from .gf2 import BitMatrix, Subspace, combine, preimage, span_solve, subquotient

__all__ = [
    "Page",
    "PageCell",
    "page",
    "differential",
    "k_stable",
    "einfty",
    "page_oracle",
    "stabilization_bound",
    "pages_tsv",
]


@dataclass(frozen=True)
class PageCell:
    n: int
    j: int
    dim: int
    reps: tuple[int, ...]
    denominator: Subspace


class Page:
    """One page: cells (n, j) with dimensions and reduced coset bases."""

    def __init__(self, k: int, sigma_maslov: int, cells: dict[tuple[int, int], PageCell]):
        self.k = k
        self.sigma_maslov = sigma_maslov
        self.cells = cells

    def dims(self) -> dict[tuple[int, int], int]:
        return {key: cell.dim for key, cell in self.cells.items() if cell.dim > 0}

    def cell_dim(self, n: int, j: int) -> int:
        cell = self.cells.get((n, j))
        return cell.dim if cell is not None else 0

    def total_dim(self) -> int:
        return sum(cell.dim for cell in self.cells.values())

    def sorted_cells(self) -> list[PageCell]:
        return [self.cells[key] for key in sorted(self.cells)]

    def __repr__(self):
        return f"Page(k={self.k}, dims={self.dims()})"


class _Engine:
    """Shared filtration plumbing for both page computations."""

    def __init__(self, c: FilteredComplex):
        self.c = c
        self.sig = c.sigma_maslov
        self.n_amb = len(c.generators)
        self.delta_cols = c.delta_columns()
        self.members = c.grade_members()
        self.grades = c.occupied_grades()
        self._f_cache: dict[int, Subspace] = {}
        self._fimg_cache: dict[int, Subspace] = {}

    def apply_delta(self, v: int) -> int:
        out = 0
        cols = self.delta_cols
        while v:
            i = (v & -v).bit_length() - 1
            v &= v - 1
            out ^= cols[i]
        return out

    def filtration(self, n: int) -> Subspace:
        """F_n: grades >= n in the residue class of n (any integer n)."""
        cached = self._f_cache.get(n)
        if cached is not None:
            return cached
        sig = self.sig
        vecs = [
            1 << i
            for i, g in enumerate(self.c.generators)
            if g.maslov >= n and (g.maslov - n) % sig == 0
        ]
        sub = Subspace.from_vectors(self.n_amb, vecs)
        self._f_cache[n] = sub
        return sub

    def delta_filtration_image(self, n: int) -> Subspace:
        """delta(F_n) as a subspace of the ambient space."""
        cached = self._fimg_cache.get(n)
        if cached is not None:
            return cached
        sub = Subspace.from_vectors(
            self.n_amb, [self.apply_delta(b) for b in self.filtration(n).basis]
        )
        self._fimg_cache[n] = sub
        return sub

    def cocycles(self, n: int, depth: int) -> Subspace:
        """Z-space { x in F_n : delta x in F_{n + depth} }."""
        return preimage(self.apply_delta, self.filtration(n), self.filtration(n + depth))

    def boundary_part(self, source: int, target: int) -> Subspace:
        """delta(F_source) restricted to F_target.

        Equals delta of { x in F_source : delta x in F_target }, because a
        boundary that lies in F_target certifies its own preimage condition.
        """
        return self.delta_filtration_image(source).intersection(self.filtration(target))

    def span(self) -> int:
        return self.grades[-1] - self.grades[0] if self.grades else 0


def stabilization_bound(c: FilteredComplex) -> int:
    """Least k >= 1 with k*Sigma + 1 > (grade span): all later differentials
    vanish for degree reasons, so page k is the limit page."""
    grades = c.occupied_grades()
    if not grades:
        return 1
    span = grades[-1] - grades[0]
    k = 1
    while k * c.sigma_maslov + 1 <= span:
        k += 1
    return k


# -- recursion path ----------------------------------------------------------


class _State:
    """Stage-s presentation of one residue column of cells.

    reps[n]: deep coset representatives of E^s at grade n;
    denom[n]: the stage-s denominator subspace D^s(n). Together
    span(reps[n]) + denom[n] is the stage-s cocycle space Z^s(n).
    """

    def __init__(self, s: int, reps: dict[int, tuple[int, ...]], denom: dict[int, Subspace]):
        self.s = s
        self.reps = reps
        self.denom = denom

    def dims(self) -> dict[int, int]:
        return {n: len(r) for n, r in self.reps.items() if r}


def _initial_state(eng: _Engine) -> _State:
    reps = {n: tuple(1 << i for i in eng.members[n]) for n in eng.grades}
    denom = {n: eng.filtration(n + eng.sig) for n in eng.grades}
    return _State(0, reps, denom)


def _cell_space(eng: _Engine, state: _State, n: int) -> Subspace:
    """Z^s(n) for any integer n, from the state when occupied."""
    if n in state.reps:
        sub = state.denom[n]
        for v in state.reps[n]:
            sub = sub.add_vector(v)
        return sub
    return eng.cocycles(n, state.s * eng.sig + 1)


def _differential_matrices(eng: _Engine, state: _State) -> dict[int, BitMatrix]:
    """Matrix of d^s out of each occupied cell, in coset-basis coordinates."""
    deg = state.s * eng.sig + 1
    out: dict[int, BitMatrix] = {}
    for n in eng.grades:
        src = state.reps[n]
        tgt = state.reps.get(n + deg, ())
        if not src:
            out[n] = BitMatrix.zeros(len(tgt), 0)
            continue
        if not tgt:
            out[n] = BitMatrix.zeros(0, len(src))
            continue
        denom = state.denom[n + deg]
        gens = list(tgt) + list(denom.basis)
        columns = []
        for v in src:
            w = eng.apply_delta(v)
            sol = span_solve(gens, w)
            if sol is None:
                raise AssertionError(
                    "differential image escaped the target cell; page recursion is inconsistent"
                )
            columns.append(sol & ((1 << len(tgt)) - 1))
        out[n] = BitMatrix.from_columns(len(tgt), columns)
    return out


def _repair(eng: _Engine, denom: Subspace, v: int, depth_grade: int) -> int:
    """Correct v by a denominator element so delta(v) lands in F_depth_grade."""
    target = eng.filtration(depth_grade)
    w = target.reduce(eng.apply_delta(v))
    if w == 0:
        return v
    gens = [target.reduce(eng.apply_delta(b)) for b in denom.basis]
    sol = span_solve(gens, w)
    if sol is None:
        raise AssertionError("no deep representative exists; page recursion is inconsistent")
    return v ^ combine(list(denom.basis), sol)


def _advance(eng: _Engine, state: _State) -> _State:
    """One homology step: state at stage s -> stage s+1.

    Kernel classes of d^s are lifted to vectors, repaired into deep position
    (a kernel representative z has delta z only in the stage-s boundary part
    of the target cell, and subtracting the certifying element of the old
    denominator pushes delta z past the next filtration level), and then
    thinned to a basis modulo the new denominator.
    """
    s = state.s
    deg = s * eng.sig + 1
    matrices = _differential_matrices(eng, state)
    new_reps: dict[int, tuple[int, ...]] = {}
    new_denom: dict[int, Subspace] = {}
    for n in eng.grades:
        denom = _cell_space(eng, state, n + eng.sig) + eng.boundary_part(n - deg, n)
        candidates = []
        src = state.reps[n]
        if src:
            for cmb in matrices[n].kernel_basis().basis:
                candidates.append(combine(list(src), cmb))
        depth_grade = n + (s + 1) * eng.sig + 1
        repaired = [_repair(eng, state.denom[n], v, depth_grade) for v in candidates]
        picked = []
        cur = denom
        for v in repaired:
            if not cur.contains(v):
                picked.append(v)
                cur = cur.add_vector(v)
        new_reps[n] = tuple(picked)
        new_denom[n] = denom
    return _State(s + 1, new_reps, new_denom)


def _states_up_to(c: FilteredComplex, k: int) -> tuple[_Engine, list[_State]]:
    eng = _Engine(c)
    states = [_initial_state(eng)]
    for _ in range(k):
        states.append(_advance(eng, states[-1]))
    return eng, states


def _page_from_state(eng: _Engine, state: _State) -> Page:
    cells = {}
    for n in eng.grades:
        j = n % eng.sig
        cells[(n, j)] = PageCell(n, j, len(state.reps[n]), state.reps[n], state.denom[n])
    return Page(state.s, eng.sig, cells)


def page(c: FilteredComplex, k: int) -> Page:
    """Page E^k, k >= 1, via the homology recursion."""
    if k < 1:
        raise ValueError("page index must be >= 1")
    eng, states = _states_up_to(c, k)
    return _page_from_state(eng, states[k])


def differential(c: FilteredComplex, k: int) -> dict[tuple[int, int], BitMatrix]:
    """Matrices of d^k out of every cell (n, j), into (n + Sigma*k + 1, j+1)."""
    if k < 1:
        raise ValueError("differential index must be >= 1")
    eng, states = _states_up_to(c, k)
    mats = _differential_matrices(eng, states[k])
    return {(n, n % eng.sig): m for n, m in mats.items()}


def k_stable(c: FilteredComplex) -> int:
    """Least k >= 1 with E^k = E^infty (page dimensions are nonincreasing
    in k cellwise, so equality with the bound page pins the limit)."""
    bound = stabilization_bound(c)
    eng, states = _states_up_to(c, bound)
    final = states[bound].dims()
    for k in range(1, bound + 1):
        if states[k].dims() == final:
            return k
    return bound


def einfty(c: FilteredComplex) -> Page:
    """The limit page, computed at the stabilization bound."""
    return page(c, stabilization_bound(c))


# -- closed-formula oracle ---------------------------------------------------


def _oracle_numerator_denominator(eng: _Engine, n: int, k: int) -> tuple[Subspace, Subspace]:
    sig = eng.sig
    z = eng.cocycles(n, k * sig + 1)
    z_above = eng.cocycles(n + sig, (k - 1) * sig + 1)
    bdry = eng.boundary_part(n - (k - 1) * sig - 1, n)
    return z, z_above + bdry


def page_oracle(c: FilteredComplex, k: int) -> Page:
    """Page E^k from the explicit subquotient formulas; no recursion."""
    if k < 1:
        raise ValueError("page index must be >= 1")
    eng = _Engine(c)
    cells = {}
    for n in eng.grades:
        j = n % eng.sig
        z, d = _oracle_numerator_denominator(eng, n, k)
        dim, reps = subquotient(z, d)
        cells[(n, j)] = PageCell(n, j, dim, reps, d)
    return Page(k, eng.sig, cells)


def oracle_differential_ranks(c: FilteredComplex, k: int) -> dict[tuple[int, int], int]:
    """rank of d^k out of each cell, from the formula presentation only."""
    if k < 1:
        raise ValueError("differential index must be >= 1")
    eng = _Engine(c)
    deg = k * eng.sig + 1
    out = {}
    for n in eng.grades:
        z, d = _oracle_numerator_denominator(eng, n, k)
        dim_cell, _ = subquotient(z, d)
        if dim_cell == 0:
            out[(n, n % eng.sig)] = 0
            continue
        _, d_target = _oracle_numerator_denominator(eng, n + deg, k)
        kernel = preimage(eng.apply_delta, z, d_target)
        dim_kernel, _ = subquotient(kernel + d.intersection(z), d)
        out[(n, n % eng.sig)] = dim_cell - dim_kernel
    return out


# -- reporting ---------------------------------------------------------------


def pages_tsv(c: FilteredComplex, max_k: int) -> str:
    """TSV page dump: one row per nonzero cell, ordered by (k, n, j)."""
    if max_k < 1:
        raise ValueError("max_k must be >= 1")
    eng, states = _states_up_to(c, max_k)
    lines = ["k\tn\tj\tdim\trank_dk"]
    for k in range(1, max_k + 1):
        mats = _differential_matrices(eng, states[k])
        for n in eng.grades:
            dim = len(states[k].reps[n])
            if dim == 0:
                continue
            lines.append(f"{k}\t{n}\t{n % eng.sig}\t{dim}\t{mats[n].rank()}")
    return "\n".join(lines) + "\n"
