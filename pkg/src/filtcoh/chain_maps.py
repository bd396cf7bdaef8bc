"""Filtered cochain maps and homotopies between complexes, as verifiable
inputs: the analytic continuation data that would produce such maps is out
of scope, so this module only certifies the algebraic conclusions: the
cochain-map equation, the homotopy identity, and induced isomorphisms on
cohomology pages."""

from __future__ import annotations

import json
from dataclasses import dataclass

from .complexes import ComplexFormatError, FilteredComplex, Violation
from .gf2 import BitMatrix, span_solve
from .spectral import _states_up_to

__all__ = [
    "FilteredMap",
    "parse_map",
    "verify_cochain_map",
    "verify_homotopy",
    "induced_page_map",
    "compose",
    "map_sum",
    "identity_map",
]


@dataclass(frozen=True)
class FilteredMap:
    """GF(2)-linear map given by generator pairs.

    ``degree`` is the mod-Sigma degree: 0 for cochain maps, -1 for
    homotopies. Every entry must shift the grade by degree + s*Sigma with
    s >= 0 (filtration preserving).
    """

    source: FilteredComplex
    target: FilteredComplex
    entries: tuple[tuple[str, str], ...]
    degree: int = 0

    def matrix_columns(self) -> list[int]:
        src_idx = self.source._index()
        tgt_idx = self.target._index()
        cols = [0] * len(self.source.generators)
        for a, b in self.entries:
            cols[src_idx[a]] ^= 1 << tgt_idx[b]
        return cols

    def apply(self, v: int) -> int:
        cols = self.matrix_columns()
        out = 0
        while v:
            i = (v & -v).bit_length() - 1
            v &= v - 1
            out ^= cols[i]
        return out


def identity_map(c: FilteredComplex) -> FilteredMap:
    return FilteredMap(c, c, tuple((g.id, g.id) for g in c.generators))


def delta_map(c: FilteredComplex) -> FilteredMap:
    """The total coboundary of ``c`` packaged as a degree +1 map."""
    return FilteredMap(c, c, c.edges, degree=1)


def parse_map(text: str, source: FilteredComplex, target: FilteredComplex,
              degree: int = 0) -> FilteredMap:
    """Map file: { "entries": [ ["src_id", "dst_id"] ] }."""
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ComplexFormatError(
            f"malformed JSON at line {exc.lineno} column {exc.colno}: {exc.msg}"
        ) from exc
    if not isinstance(data, dict) or set(data) != {"entries"}:
        raise ComplexFormatError('map file must be {"entries": [...]}')
    if not isinstance(data["entries"], list):
        raise ComplexFormatError("entries must be a list")
    entries = []
    for k, item in enumerate(data["entries"]):
        if not (isinstance(item, list) and len(item) == 2 and all(isinstance(x, str) for x in item)):
            raise ComplexFormatError(f"map entry #{k} must be a pair of id strings")
        entries.append((item[0], item[1]))
    return FilteredMap(source, target, tuple(entries), degree)


def _structural_violations(f: FilteredMap) -> list[Violation]:
    out: list[Violation] = []
    if f.source.sigma_maslov != f.target.sigma_maslov:
        out.append(
            Violation(
                "map-period",
                (),
                f"source and target Maslov periods differ "
                f"({f.source.sigma_maslov} vs {f.target.sigma_maslov})",
            )
        )
        return out
    sig = f.source.sigma_maslov
    src_idx = f.source._index()
    tgt_idx = f.target._index()
    seen = set()
    for a, b in f.entries:
        if a not in src_idx or b not in tgt_idx:
            out.append(Violation("map-ids", (a, b), "entry references an unknown id"))
            continue
        if (a, b) in seen:
            out.append(Violation("map-duplicate", (a, b), "entry listed twice"))
            continue
        seen.add((a, b))
        jump = f.target.generators[tgt_idx[b]].maslov - f.source.generators[src_idx[a]].maslov
        s, rem = divmod(jump - f.degree, sig)
        if rem != 0:
            out.append(
                Violation(
                    "map-degree",
                    (a, b),
                    f"grade shift {jump} is not degree {f.degree} mod Sigma",
                )
            )
        elif s < 0:
            out.append(
                Violation(
                    "map-filtration",
                    (a, b),
                    f"grade shift {jump} drops the filtration (shift {s} < 0)",
                )
            )
    return out


def verify_cochain_map(f: FilteredMap) -> list[Violation]:
    """Empty iff f is a filtration-preserving degree-0 map commuting with
    the total coboundaries, reported grade by grade."""
    out = _structural_violations(f)
    if f.degree != 0:
        out.append(Violation("map-degree", (), f"cochain map must have degree 0, got {f.degree}"))
    if out:
        return out
    fcols = f.matrix_columns()
    dsrc = f.source.delta_columns()
    dtgt = f.target.delta_columns()

    def tgt_apply(v, cols):
        acc = 0
        while v:
            i = (v & -v).bit_length() - 1
            v &= v - 1
            acc ^= cols[i]
        return acc

    bad_grades = []
    for i, g in enumerate(f.source.generators):
        lhs = tgt_apply(dsrc[i], fcols)
        rhs = tgt_apply(fcols[i], dtgt)
        if lhs != rhs:
            bad_grades.append((g.maslov, g.id))
    for n, gid in sorted(bad_grades):
        out.append(
            Violation(
                "cochain-commute",
                (gid,),
                f"delta f != f delta on generator {gid!r} at grade {n}",
            )
        )
    return out


def verify_homotopy(f: FilteredMap, g: FilteredMap, h: FilteredMap) -> list[Violation]:
    """Empty iff f - g = H delta + delta H over GF(2) in every grade, with H
    a filtration-compatible map of mod-Sigma degree -1."""
    out: list[Violation] = []
    if f.source != g.source or f.target != g.target:
        out.append(Violation("homotopy-ends", (), "f and g must share source and target"))
    if h.source != f.source or h.target != f.target:
        out.append(Violation("homotopy-ends", (), "H must connect the same complexes as f and g"))
    if out:
        return out
    if h.degree != -1:
        out.append(Violation("homotopy-degree", (), f"H must have degree -1, got {h.degree}"))
    out.extend(_structural_violations(f))
    out.extend(_structural_violations(g))
    out.extend(_structural_violations(h))
    if out:
        return out
    fc, gc, hc = f.matrix_columns(), g.matrix_columns(), h.matrix_columns()
    dsrc = f.source.delta_columns()
    dtgt = f.target.delta_columns()

    def chain(v, first, second):
        acc = 0
        mid = 0
        while v:
            i = (v & -v).bit_length() - 1
            v &= v - 1
            mid ^= first[i]
        while mid:
            i = (mid & -mid).bit_length() - 1
            mid &= mid - 1
            acc ^= second[i]
        return acc

    failing = []
    for i, gen in enumerate(f.source.generators):
        e = 1 << i
        lhs = fc[i] ^ gc[i]
        rhs = chain(e, dsrc, hc) ^ chain(e, hc, dtgt)
        if lhs != rhs:
            failing.append((gen.maslov, gen.id))
    if failing:
        n, gid = min(failing)
        out.append(
            Violation(
                "homotopy-identity",
                tuple(gid for _, gid in sorted(failing)),
                f"f + g + H delta + delta H is nonzero, first failing grade {n}",
            )
        )
    return out


@dataclass(frozen=True)
class PageMapReport:
    k: int
    matrices: dict
    iso: bool


def induced_page_map(f: FilteredMap, k: int) -> PageMapReport:
    """Matrices of a verified cochain map on the stage-k page cells, plus a
    flag that is True iff the map is bijective on every cell."""
    problems = verify_cochain_map(f)
    if problems:
        raise ValueError("not a cochain map: " + "; ".join(v.rule for v in problems))
    if k < 1:
        raise ValueError("page index must be >= 1")
    src_eng, src_states = _states_up_to(f.source, k)
    tgt_eng, tgt_states = _states_up_to(f.target, k)
    src_state, tgt_state = src_states[k], tgt_states[k]
    matrices = {}
    iso = True
    for n in sorted(set(src_eng.grades) | set(tgt_eng.grades)):
        j = n % f.source.sigma_maslov
        src_reps = src_state.reps.get(n, ())
        tgt_reps = tgt_state.reps.get(n, ())
        if not src_reps and not tgt_reps:
            continue
        if not src_reps or not tgt_reps:
            matrices[(n, j)] = BitMatrix.zeros(len(tgt_reps), len(src_reps))
            iso = False
            continue
        denom = tgt_state.denom[n]
        gens = list(tgt_reps) + list(denom.basis)
        cols = []
        for v in src_reps:
            sol = span_solve(gens, f.apply(v))
            if sol is None:
                raise AssertionError("image of a page class escaped the target cell")
            cols.append(sol & ((1 << len(tgt_reps)) - 1))
        mat = BitMatrix.from_columns(len(tgt_reps), cols)
        matrices[(n, j)] = mat
        if mat.rows != mat.cols or mat.rank() != mat.rows:
            iso = False
    return PageMapReport(k, matrices, iso)


def compose(second: FilteredMap, first: FilteredMap) -> FilteredMap:
    """second after first, as an entries list (mod-2 accumulated)."""
    if first.target != second.source:
        raise ValueError("composition mismatch: first.target != second.source")
    cols_first = first.matrix_columns()
    cols_second = second.matrix_columns()
    entries = []
    tgt_ids = [g.id for g in second.target.generators]
    for i, g in enumerate(first.source.generators):
        v = cols_first[i]
        acc = 0
        while v:
            t = (v & -v).bit_length() - 1
            v &= v - 1
            acc ^= cols_second[t]
        while acc:
            t = (acc & -acc).bit_length() - 1
            acc &= acc - 1
            entries.append((g.id, tgt_ids[t]))
    return FilteredMap(
        first.source, second.target, tuple(entries), first.degree + second.degree
    )


def map_sum(f: FilteredMap, g: FilteredMap) -> FilteredMap:
    """f + g over GF(2) as an entries list."""
    if f.source != g.source or f.target != g.target or f.degree != g.degree:
        raise ValueError("summands must share source, target, and degree")
    fc, gc = f.matrix_columns(), g.matrix_columns()
    tgt_ids = [x.id for x in f.target.generators]
    entries = []
    for i, gen in enumerate(f.source.generators):
        v = fc[i] ^ gc[i]
        while v:
            t = (v & -v).bit_length() - 1
            v &= v - 1
            entries.append((gen.id, tgt_ids[t]))
    return FilteredMap(f.source, f.target, tuple(entries), f.degree)
