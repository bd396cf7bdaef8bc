"""Data model for finite, action-filtered, integer-graded cochain complexes over GF(2).

A complex carries a Maslov period ``Sigma`` (integer >= 1), a monotonicity
constant ``lambda`` (positive rational), an action period ``sigma = lambda *
Sigma``, a regular cut value ``r``, generators (id, exact rational action,
integer grade) and coboundary edges. Every generator's action must lie
strictly inside the open window ``(r, r + sigma)``; every edge must raise the
grade by ``1 + i*Sigma`` for a nonnegative integer window shift ``i``, with a
strict action drop whenever ``i = 0``; and the total coboundary must square
to zero over GF(2).

File format (UTF-8 JSON, field names exact)::

    { "sigma_maslov": int, "lambda": "p/q", "r": "p/q",
      "generators": [ { "id": str, "action": "p/q", "maslov": int } ],
      "edges": [ [ "from_id", "to_id" ] ] }

Rationals are strings "p/q" or integer strings, reduced on load; the action
period sigma is derived, never stored.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Union

from .gf2 import BitMatrix

RationalLike = Union[Fraction, int, str]


class ComplexFormatError(ValueError):
    """Structurally malformed complex/map/matching file."""


@dataclass(frozen=True)
class Violation:
    """One broken invariant: the rule name, the ids involved, and detail."""

    rule: str
    ids: tuple[str, ...]
    detail: str

    def as_dict(self) -> dict:
        return {"rule": self.rule, "ids": list(self.ids), "detail": self.detail}


@dataclass(frozen=True)
class Generator:
    id: str
    action: Fraction
    maslov: int


@dataclass(frozen=True)
class GradedPiece:
    n: int
    generators: tuple[str, ...]


@dataclass(frozen=True)
class FilteredComplex:
    sigma_maslov: int
    lam: Fraction
    r: Fraction
    generators: tuple[Generator, ...]
    edges: tuple[tuple[str, str], ...]

    @property
    def sigma_action(self) -> Fraction:
        return self.lam * self.sigma_maslov

    def index_of(self, gid: str) -> int:
        return self._index()[gid]

    def _index(self) -> dict[str, int]:
        return {g.id: i for i, g in enumerate(self.generators)}

    def grade(self, gid: str) -> int:
        return self.generators[self.index_of(gid)].maslov

    def edge_shift(self, edge: tuple[str, str]) -> Fraction:
        """Window shift (mu(to) - mu(from) - 1) / Sigma of a single edge."""
        idx = self._index()
        jump = self.generators[idx[edge[1]]].maslov - self.generators[idx[edge[0]]].maslov
        return Fraction(jump - 1, self.sigma_maslov)

    def occupied_grades(self) -> tuple[int, ...]:
        return tuple(sorted({g.maslov for g in self.generators}))

    def grade_members(self) -> dict[int, list[int]]:
        """Generator indices per occupied grade, in storage order."""
        out: dict[int, list[int]] = {}
        for i, g in enumerate(self.generators):
            out.setdefault(g.maslov, []).append(i)
        return out

    def delta_columns(self) -> list[int]:
        """Total coboundary: bitmask of targets per generator index."""
        idx = self._index()
        cols = [0] * len(self.generators)
        for a, b in self.edges:
            cols[idx[a]] ^= 1 << idx[b]
        return cols

    def shift0_columns(self) -> list[int]:
        """Shift-0 part of the coboundary (the integer-graded differential)."""
        idx = self._index()
        cols = [0] * len(self.generators)
        for a, b in self.edges:
            ia, ib = idx[a], idx[b]
            if self.generators[ib].maslov - self.generators[ia].maslov == 1:
                cols[ia] ^= 1 << ib
        return cols


def as_fraction(value: RationalLike, where: str = "value") -> Fraction:
    """Exact rational from an int, Fraction, or "p/q" / integer string."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise ComplexFormatError(f"{where}: expected a rational, got a boolean")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise ComplexFormatError(f"{where}: not a rational: {value!r}") from exc
    raise ComplexFormatError(
        f"{where}: expected a rational string, got {type(value).__name__} {value!r}"
    )


def format_fraction(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def build_complex(
    sigma_maslov: int,
    lam: RationalLike,
    r: RationalLike,
    generators: Iterable[tuple[str, RationalLike, int]],
    edges: Iterable[tuple[str, str]] = (),
) -> FilteredComplex:
    """Construct a complex from plain data, coercing rationals; no validation."""
    gens = tuple(
        Generator(gid, as_fraction(action, f"action of {gid!r}"), int(maslov))
        for gid, action, maslov in generators
    )
    return FilteredComplex(
        sigma_maslov=int(sigma_maslov),
        lam=as_fraction(lam, "lambda"),
        r=as_fraction(r, "r"),
        generators=gens,
        edges=tuple((str(a), str(b)) for a, b in edges),
    )


_TOP_FIELDS = {"sigma_maslov", "lambda", "r", "generators", "edges"}
_GEN_FIELDS = {"id", "action", "maslov"}


def parse_complex(text: str) -> FilteredComplex:
    """Parse and structurally check a complex file.

    Raises ComplexFormatError on malformed syntax, non-rational numerics,
    duplicate ids, unknown ids in edges, duplicate edges, and edges whose
    grade jump is not 1 + i*Sigma with integer i >= 0. Semantic invariants
    (action window, action monotonicity, delta squared) are reported by
    ``validate``, not here.
    """
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ComplexFormatError(
            f"malformed JSON at line {exc.lineno} column {exc.colno}: {exc.msg}"
        ) from exc
    if not isinstance(data, dict):
        raise ComplexFormatError("top level must be a JSON object")
    unknown = set(data) - _TOP_FIELDS
    if unknown:
        raise ComplexFormatError(f"unknown top-level fields: {sorted(unknown)}")
    missing = _TOP_FIELDS - set(data)
    if missing:
        raise ComplexFormatError(f"missing top-level fields: {sorted(missing)}")
    if not isinstance(data["sigma_maslov"], int) or isinstance(data["sigma_maslov"], bool):
        raise ComplexFormatError("sigma_maslov must be an integer")
    sigma_maslov = data["sigma_maslov"]
    if sigma_maslov < 1:
        raise ComplexFormatError("sigma_maslov must be >= 1")
    lam = as_fraction(data["lambda"], "lambda")
    if lam <= 0:
        raise ComplexFormatError("lambda must be positive")
    r = as_fraction(data["r"], "r")
    if not isinstance(data["generators"], list):
        raise ComplexFormatError("generators must be a list")
    gens = []
    seen_ids = set()
    for k, item in enumerate(data["generators"]):
        if not isinstance(item, dict):
            raise ComplexFormatError(f"generator #{k} must be an object")
        if set(item) != _GEN_FIELDS:
            raise ComplexFormatError(f"generator #{k} must have exactly fields id, action, maslov")
        gid = item["id"]
        if not isinstance(gid, str) or not gid:
            raise ComplexFormatError(f"generator #{k}: id must be a nonempty string")
        if gid in seen_ids:
            raise ComplexFormatError(f"duplicate generator id {gid!r}")
        seen_ids.add(gid)
        if not isinstance(item["maslov"], int) or isinstance(item["maslov"], bool):
            raise ComplexFormatError(f"generator {gid!r}: maslov must be an integer")
        gens.append(Generator(gid, as_fraction(item["action"], f"action of {gid!r}"), item["maslov"]))
    if not isinstance(data["edges"], list):
        raise ComplexFormatError("edges must be a list")
    grade = {g.id: g.maslov for g in gens}
    edges = []
    seen_edges = set()
    for k, item in enumerate(data["edges"]):
        if not (isinstance(item, list) and len(item) == 2 and all(isinstance(x, str) for x in item)):
            raise ComplexFormatError(f"edge #{k} must be a pair of id strings")
        a, b = item
        for gid in (a, b):
            if gid not in grade:
                raise ComplexFormatError(f"edge #{k}: unknown id {gid!r}")
        if (a, b) in seen_edges:
            raise ComplexFormatError(f"duplicate edge ({a!r}, {b!r})")
        seen_edges.add((a, b))
        jump = grade[b] - grade[a]
        shift, rem = divmod(jump - 1, sigma_maslov)
        if rem != 0:
            raise ComplexFormatError(
                f"edge ({a!r}, {b!r}): grade jump {jump} gives non-integral window shift"
            )
        if shift < 0:
            raise ComplexFormatError(
                f"edge ({a!r}, {b!r}): grade jump {jump} gives negative window shift {shift}"
            )
        edges.append((a, b))
    return FilteredComplex(sigma_maslov, lam, r, tuple(gens), tuple(edges))


def serialize_complex(c: FilteredComplex) -> str:
    data = {
        "sigma_maslov": c.sigma_maslov,
        "lambda": format_fraction(c.lam),
        "r": format_fraction(c.r),
        "generators": [
            {"id": g.id, "action": format_fraction(g.action), "maslov": g.maslov}
            for g in c.generators
        ],
        "edges": [[a, b] for a, b in c.edges],
    }
    return json.dumps(data, indent=2) + "\n"


def load_complex(path: str) -> FilteredComplex:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_complex(fh.read())


def validate(c: FilteredComplex) -> list[Violation]:
    """All semantic invariants; empty list iff the complex is valid.

    Violations are data, not failures: each names the broken rule and the
    offending ids.
    """
    out: list[Violation] = []
    if c.sigma_maslov < 1:
        out.append(Violation("sigma-positive", (), f"sigma_maslov = {c.sigma_maslov} < 1"))
        return out
    if c.lam <= 0:
        out.append(Violation("lambda-positive", (), f"lambda = {c.lam} is not positive"))
    sigma = c.sigma_action
    ids = [g.id for g in c.generators]
    seen = set()
    for gid in ids:
        if gid in seen:
            out.append(Violation("distinct-ids", (gid,), f"duplicate generator id {gid!r}"))
        seen.add(gid)
    if len(seen) != len(ids):
        return out
    index = {g.id: i for i, g in enumerate(c.generators)}

    if c.lam > 0:
        for g in c.generators:
            if not (c.r < g.action < c.r + sigma):
                out.append(
                    Violation(
                        "action-window",
                        (g.id,),
                        f"action {g.action} outside the open window ({c.r}, {c.r + sigma})",
                    )
                )

    edges_ok = True
    seen_edges = set()
    for a, b in c.edges:
        if a not in index or b not in index:
            out.append(Violation("edge-ids", (a, b), "edge references an unknown id"))
            edges_ok = False
            continue
        if (a, b) in seen_edges:
            out.append(Violation("edge-duplicate", (a, b), "edge listed twice"))
            edges_ok = False
            continue
        seen_edges.add((a, b))
        ga, gb = c.generators[index[a]], c.generators[index[b]]
        jump = gb.maslov - ga.maslov
        shift, rem = divmod(jump - 1, c.sigma_maslov)
        if rem != 0:
            out.append(
                Violation(
                    "shift-integrality",
                    (a, b),
                    f"grade jump {jump} is not 1 + i*Sigma for integral i",
                )
            )
            edges_ok = False
            continue
        if shift < 0:
            out.append(
                Violation("shift-nonnegative", (a, b), f"window shift {shift} is negative")
            )
            edges_ok = False
            continue
        if shift == 0 and not (ga.action > gb.action):
            out.append(
                Violation(
                    "action-monotone",
                    (a, b),
                    f"shift-0 edge must drop the action: a({a}) = {ga.action} "
                    f"<= a({b}) = {gb.action}",
                )
            )

    if edges_ok:
        cols = c.delta_columns()
        n = len(c.generators)
        for i in range(n):
            acc = 0
            v = cols[i]
            while v:
                j = (v & -v).bit_length() - 1
                v &= v - 1
                acc ^= cols[j]
            if acc:
                targets = tuple(ids[j] for j in range(n) if (acc >> j) & 1)
                out.append(
                    Violation(
                        "delta-squared",
                        (ids[i],) + targets,
                        f"delta(delta({ids[i]!r})) has odd two-trajectory parity into "
                        + ", ".join(repr(t) for t in targets),
                    )
                )
    return out


def warnings(c: FilteredComplex) -> list[str]:
    """Out-of-theory flags that are accepted by the data model."""
    out = []
    if 1 <= c.sigma_maslov <= 2:
        out.append(
            f"sigma_maslov = {c.sigma_maslov}: the theory behind this engine needs the "
            "Maslov period >= 3; results are formal bookkeeping only"
        )
    return out


def associated_graded(c: FilteredComplex) -> list[tuple[int, GradedPiece, BitMatrix]]:
    """Per occupied grade n: the piece at n and the shift-0 matrix into n+1.

    Discarding all shift >= 1 edges is exactly the passage to the quotient
    F_n / F_{n+Sigma}.
    """
    members = c.grade_members()
    ids = [g.id for g in c.generators]
    out = []
    for n in c.occupied_grades():
        src = members[n]
        dst = members.get(n + 1, [])
        dst_pos = {gi: k for k, gi in enumerate(dst)}
        src_pos = {gi: k for k, gi in enumerate(src)}
        entries = []
        index = c._index()
        for a, b in c.edges:
            ia, ib = index[a], index[b]
            if ia in src_pos and ib in dst_pos:
                entries.append((dst_pos[ib], src_pos[ia]))
        piece = GradedPiece(n, tuple(ids[i] for i in src))
        out.append((n, piece, BitMatrix.from_entries(len(dst), len(src), entries)))
    return out


def shift_complex(c: FilteredComplex, steps: int = 1) -> FilteredComplex:
    """Relabel through ``steps`` deck transformations: r += steps*sigma,
    every action += steps*sigma, every grade += steps*Sigma.

    The underlying complex is unchanged, so I^(r+sigma)_{n+Sigma} = I^(r)_n.
    """
    sigma = c.sigma_action
    gens = tuple(
        Generator(g.id, g.action + steps * sigma, g.maslov + steps * c.sigma_maslov)
        for g in c.generators
    )
    return FilteredComplex(c.sigma_maslov, c.lam, c.r + steps * sigma, gens, c.edges)


def relabel_complex(c: FilteredComplex, mapping: dict[str, str]) -> FilteredComplex:
    """Rename generators through a bijective id mapping."""
    values = list(mapping.values())
    if len(set(values)) != len(values):
        raise ValueError("relabeling is not injective")
    gens = tuple(Generator(mapping[g.id], g.action, g.maslov) for g in c.generators)
    edges = tuple((mapping[a], mapping[b]) for a, b in c.edges)
    return FilteredComplex(c.sigma_maslov, c.lam, c.r, gens, edges)
