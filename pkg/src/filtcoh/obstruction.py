"""Polynomial obstruction calculus on spectral-sequence pages.

Provides exact Laurent polynomials of page dimensions, the per-page rank
identity they satisfy, a complete bounded search for decompositions

    target(t) = sum_{i=1}^{k} (1 + t^{i*Sigma + 1}) Q_i(t)

with nonnegative integer coefficients, alternating binomial sums with their
closed form, a signed rank-balance check for acyclic complexes, and the full
even-period exclusion procedure answering the torus question.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

from .complexes import FilteredComplex
from .spectral import Page, _states_up_to, _differential_matrices, stabilization_bound

__all__ = [
    "LaurentPoly",
    "poincare_laurent",
    "check_page_recursion",
    "DecompositionResult",
    "decomposition_search",
    "decomposition_search_colex",
    "alternating_binomial_sum",
    "PreconditionError",
    "rank_balance",
    "AudinCase",
    "AudinReport",
    "audin_decide",
]


class LaurentPoly:
    """Laurent polynomial with arbitrary-precision integer coefficients,
    stored as a map exponent -> coefficient with no explicit zeros."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Optional[dict[int, int]] = None):
        self.coeffs = {e: c for e, c in (coeffs or {}).items() if c != 0}

    @classmethod
    def zero(cls) -> "LaurentPoly":
        return cls()

    @classmethod
    def one(cls) -> "LaurentPoly":
        return cls({0: 1})

    @classmethod
    def term(cls, exponent: int, coeff: int = 1) -> "LaurentPoly":
        return cls({exponent: coeff})

    @classmethod
    def binomial_power(cls, m: int) -> "LaurentPoly":
        """(1 + t)^m."""
        return cls({e: math.comb(m, e) for e in range(m + 1)})

    def __add__(self, other: "LaurentPoly") -> "LaurentPoly":
        out = dict(self.coeffs)
        for e, c in other.coeffs.items():
            out[e] = out.get(e, 0) + c
        return LaurentPoly(out)

    def __sub__(self, other: "LaurentPoly") -> "LaurentPoly":
        out = dict(self.coeffs)
        for e, c in other.coeffs.items():
            out[e] = out.get(e, 0) - c
        return LaurentPoly(out)

    def __mul__(self, other: "LaurentPoly") -> "LaurentPoly":
        out: dict[int, int] = {}
        for e1, c1 in self.coeffs.items():
            for e2, c2 in other.coeffs.items():
                e = e1 + e2
                out[e] = out.get(e, 0) + c1 * c2
        return LaurentPoly(out)

    def shifted(self, exponent: int) -> "LaurentPoly":
        """Multiply by t^exponent."""
        return LaurentPoly({e + exponent: c for e, c in self.coeffs.items()})

    def __eq__(self, other: object) -> bool:
        return isinstance(other, LaurentPoly) and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(tuple(sorted(self.coeffs.items())))

    def is_zero(self) -> bool:
        return not self.coeffs

    def is_nonnegative(self) -> bool:
        return all(c >= 0 for c in self.coeffs.values())

    def coeff(self, e: int) -> int:
        return self.coeffs.get(e, 0)

    @property
    def min_exp(self) -> int:
        return min(self.coeffs) if self.coeffs else 0

    @property
    def max_exp(self) -> int:
        return max(self.coeffs) if self.coeffs else 0

    def __call__(self, t: int) -> int:
        return sum(c * t**e for e, c in self.coeffs.items())

    def terms(self) -> list[list[int]]:
        return [[e, self.coeffs[e]] for e in sorted(self.coeffs)]

    def __str__(self):
        if not self.coeffs:
            return "0"
        parts = []
        for e in sorted(self.coeffs):
            c = self.coeffs[e]
            if e == 0:
                parts.append(str(c))
            elif c == 1:
                parts.append(f"t^{e}")
            else:
                parts.append(f"{c}*t^{e}")
        return " + ".join(parts)

    __repr__ = __str__


def poincare_laurent(p: Page) -> LaurentPoly:
    """Sum over cells of dim * t^n."""
    out: dict[int, int] = {}
    for (n, _j), cell in p.cells.items():
        if cell.dim:
            out[n] = out.get(n, 0) + cell.dim
    return LaurentPoly(out)


@dataclass(frozen=True)
class RecursionViolation:
    k: int
    lhs: LaurentPoly
    rhs: LaurentPoly

    def as_dict(self) -> dict:
        return {"k": self.k, "lhs": self.lhs.terms(), "rhs": self.rhs.terms()}


def check_page_recursion(c: FilteredComplex) -> list[RecursionViolation]:
    """Verify P(E^k) = P(E^{k+1}) + (1 + t^(-k*Sigma-1)) P(B^k) for every k
    up to stabilization, with B^k the image of d^k indexed by target grade."""
    sig = c.sigma_maslov
    bound = stabilization_bound(c)
    eng, states = _states_up_to(c, bound + 1)
    out = []
    for k in range(1, bound + 1):
        lhs = LaurentPoly({n: d for n, d in states[k].dims().items()})
        nxt = LaurentPoly({n: d for n, d in states[k + 1].dims().items()})
        mats = _differential_matrices(eng, states[k])
        image = LaurentPoly(
            {n + k * sig + 1: mats[n].rank() for n in mats if mats[n].rank() > 0}
        )
        rhs = nxt + image + image.shifted(-(k * sig + 1))
        if lhs != rhs:
            out.append(RecursionViolation(k, lhs, rhs))
    return out


# -- decomposition search ----------------------------------------------------

@dataclass(frozen=True)
class DecompositionResult:
    """Witness list (Q_1 .. Q_k) or a certified none; the search is complete
    because coefficients are nonnegative, so every degree bound and
    coefficient cap is forced rather than heuristic."""

    sigma: int
    k: int
    target: LaurentPoly
    witness: Optional[tuple[LaurentPoly, ...]]
    nodes: int

    @property
    def found(self) -> bool:
        return self.witness is not None

    def verify(self) -> bool:
        if self.witness is None:
            return False
        acc = LaurentPoly.zero()
        for i, q in enumerate(self.witness, start=1):
            acc = acc + (LaurentPoly.one() + LaurentPoly.term(i * self.sigma + 1)) * q
        return acc == self.target and all(q.is_nonnegative() for q in self.witness)


def _check_search_args(target: LaurentPoly, sigma: int, k: int) -> None:
    if sigma < 1 or k < 1:
        raise ValueError("sigma and k must be >= 1")
    if not target.is_nonnegative():
        raise ValueError("target must have nonnegative coefficients")
    if not target.is_zero() and target.min_exp < 0:
        raise ValueError("target must be an ordinary polynomial (no negative exponents)")


def decomposition_search(target: LaurentPoly, sigma: int, k: int) -> DecompositionResult:
    """Complete search, processing coefficient constraints from the top
    degree downward.

    Writing T = sum_i (Q_i + t^(i*sigma+1) Q_i), the coefficient q_i(x) is
    forced to satisfy q_i(x) <= T(x) and q_i(x) <= T(x + i*sigma + 1), and
    deg Q_i <= deg T - i*sigma - 1; the enumeration below walks exponents
    e = deg T .. 0, choosing at each e the split of the residual demand
    among the q_i(e - i*sigma - 1).
    """
    _check_search_args(target, sigma, k)
    if target.is_zero():
        return DecompositionResult(sigma, k, target, tuple(LaurentPoly.zero() for _ in range(k)), 1)
    deg = target.max_exp
    offsets = [i * sigma + 1 for i in range(1, k + 1)]
    deg_q = [deg - off for off in offsets]  # negative: that Q_i is identically 0
    tcoef = [target.coeff(e) for e in range(deg + 1)]
    q: list[dict[int, int]] = [dict() for _ in range(k)]
    nodes = 0

    def residual(e: int) -> int:
        # q_i(e) parts were chosen at constraint e + offset_i
        s = tcoef[e]
        for i in range(k):
            if e <= deg_q[i]:
                s -= q[i].get(e, 0)
        return s

    def descend(e: int) -> bool:
        nonlocal nodes
        nodes += 1
        if e < 0:
            return True
        need = residual(e)
        if need < 0:
            return False
        slots = [i for i in range(k) if 0 <= e - offsets[i] <= deg_q[i]]
        if not slots:
            return need == 0 and descend(e - 1)

        def split(pos: int, left: int) -> bool:
            nonlocal nodes
            if pos == len(slots) - 1:
                i = slots[pos]
                x = e - offsets[i]
                if left > tcoef[x]:
                    return False
                q[i][x] = left
                if descend(e - 1):
                    return True
                del q[i][x]
                return False
            i = slots[pos]
            x = e - offsets[i]
            for val in range(min(left, tcoef[x]) + 1):
                nodes += 1
                q[i][x] = val
                if split(pos + 1, left - val):
                    return True
            del q[i][x]
            return False

        return split(0, need)

    if descend(deg):
        witness = tuple(LaurentPoly(qi) for qi in q)
        return DecompositionResult(sigma, k, target, witness, nodes)
    return DecompositionResult(sigma, k, target, None, nodes)


def decomposition_search_colex(target: LaurentPoly, sigma: int, k: int) -> DecompositionResult:
    """Independent re-verification scan: same bounded feasibility problem,
    enumerated from the bottom exponent upward with the opposite variable
    order inside each constraint."""
    _check_search_args(target, sigma, k)
    if target.is_zero():
        return DecompositionResult(sigma, k, target, tuple(LaurentPoly.zero() for _ in range(k)), 1)
    deg = target.max_exp
    offsets = [i * sigma + 1 for i in range(1, k + 1)]
    deg_q = [deg - off for off in offsets]
    tcoef = [target.coeff(e) for e in range(deg + 1)]
    q: list[dict[int, int]] = [dict() for _ in range(k)]
    nodes = 0

    def residual(e: int) -> int:
        # q_i(e - offset_i) parts were chosen at constraint e - offset_i
        s = tcoef[e]
        for i in range(k):
            x = e - offsets[i]
            if 0 <= x <= deg_q[i]:
                s -= q[i].get(x, 0)
        return s

    def ascend(e: int) -> bool:
        nonlocal nodes
        nodes += 1
        if e > deg:
            return True
        need = residual(e)
        if need < 0:
            return False
        slots = [i for i in reversed(range(k)) if e <= deg_q[i]]
        if not slots:
            return need == 0 and ascend(e + 1)

        def split(pos: int, left: int) -> bool:
            nonlocal nodes
            i = slots[pos]
            cap = tcoef[e + offsets[i]]
            if pos == len(slots) - 1:
                if left > cap:
                    return False
                q[i][e] = left
                if ascend(e + 1):
                    return True
                del q[i][e]
                return False
            for val in range(min(left, cap), -1, -1):
                nodes += 1
                q[i][e] = val
                if split(pos + 1, left - val):
                    return True
            del q[i][e]
            return False

        return split(0, need)

    if ascend(0):
        witness = tuple(LaurentPoly(qi) for qi in q)
        return DecompositionResult(sigma, k, target, witness, nodes)
    return DecompositionResult(sigma, k, target, None, nodes)


def alternating_binomial_sum(m: int, n_top: int) -> int:
    """sum_{l=0}^{N} (-1)^l C(m, l); equals (-1)^N C(m-1, N)."""
    if m < 1 or n_top < 0:
        raise ValueError("need m >= 1 and N >= 0")
    return sum((-1) ** l * math.comb(m, l) for l in range(n_top + 1))


class PreconditionError(ValueError):
    """A check was invoked outside its stated hypotheses."""


def rank_balance(c: FilteredComplex) -> bool:
    """Signed rank bookkeeping: for even Sigma and vanishing limit page,
    sum_j (-1)^j sum_{pages k} dim_j(E^k) must cancel to zero exactly."""
    sig = c.sigma_maslov
    if sig % 2 != 0:
        raise PreconditionError(f"rank balance needs an even Maslov period, got {sig}")
    bound = stabilization_bound(c)
    eng, states = _states_up_to(c, bound)
    if states[bound].dims():
        raise PreconditionError("rank balance needs a vanishing limit page (acyclic total complex)")
    total = 0
    for k in range(1, bound + 1):
        for n, d in states[k].dims().items():
            total += (-1) ** (n % sig) * d
    return total == 0


# -- the Audin decision procedure --------------------------------------------

@dataclass(frozen=True)
class AudinCase:
    """One even candidate Maslov period and the rule that disposes of it.

    For period Sigma and a hypothetical stabilization index K >= 2, the
    acyclic spectral sequence of an embedded torus forces the truncated
    alternating binomial sum at N = K*Sigma - 1 to vanish, which happens
    only for N >= m; the degree constraint forces N <= m. Both pin
    m + 1 = K*Sigma, the single escape; K = 1 is killed outright because
    page one carries the nonzero torus cohomology."""

    sigma: int
    status: str  # excluded_degree | excluded_partial_sum | excluded_k1 | escape
    k: Optional[int] = None
    detail: str = ""

    def as_dict(self) -> dict:
        out: dict = {"Sigma": self.sigma, "status": self.status}
        if self.k is not None:
            out["k"] = self.k
        return out


@dataclass(frozen=True)
class AudinReport:
    m: int
    cases: tuple[AudinCase, ...]
    resolution: Optional["AudinReport"]
    verdict: int
    axioms: tuple[str, ...] = (
        "H^*(T^m; Z2) is nonzero for a compact Lagrangian embedding",
        "a displaceable Lagrangian has vanishing total Floer cohomology",
    )

    def as_dict(self) -> dict:
        out = {
            "m": self.m,
            "cases": [case.as_dict() for case in self.cases],
            "verdict": self.verdict,
        }
        if self.resolution is not None:
            out["resolution"] = self.resolution.as_dict()
        return out

    def table(self) -> str:
        lines = [f"m = {self.m}"]
        if not self.cases:
            lines.append("  no even candidate period in [4, m+1]; verdict immediate")
        for case in self.cases:
            mark = f" (k = {case.k})" if case.k is not None else ""
            detail = f"  -- {case.detail}" if case.detail else ""
            lines.append(f"  Sigma = {case.sigma}: {case.status}{mark}{detail}")
        if self.resolution is not None:
            lines.append(f"  escapes resolved by doubling to m = {self.resolution.m}:")
            for sub in self.resolution.table().splitlines():
                lines.append("  " + sub)
        lines.append(f"verdict: Sigma(L) = {self.verdict}")
        return "\n".join(lines)


def _audin_cases(m: int) -> tuple[AudinCase, ...]:
    cases = []
    for sigma in range(4, m + 2, 2):
        kmax = (m + 1) // sigma
        if (m + 1) % sigma == 0:
            k_escape = (m + 1) // sigma
            if k_escape == 1:
                cases.append(
                    AudinCase(
                        sigma,
                        "excluded_k1",
                        k=1,
                        detail="stabilizing at page one contradicts nonzero torus cohomology",
                    )
                )
            else:
                cases.append(
                    AudinCase(
                        sigma,
                        "escape",
                        k=k_escape,
                        detail=f"counting survives only if the page sequence stabilizes at {k_escape}",
                    )
                )
            continue
        if kmax >= 2:
            # every K in [2, kmax] leaves a nonzero truncated alternating sum
            witness = {
                kk: alternating_binomial_sum(m, kk * sigma - 1) for kk in range(2, kmax + 1)
            }
            assert all(v != 0 for v in witness.values())
            cases.append(
                AudinCase(
                    sigma,
                    "excluded_partial_sum",
                    detail="truncated alternating sums "
                    + ", ".join(f"N={kk * sigma - 1}: {v}" for kk, v in witness.items()),
                )
            )
        else:
            cases.append(
                AudinCase(
                    sigma,
                    "excluded_degree",
                    detail=f"2*Sigma - 1 = {2 * sigma - 1} already exceeds m = {m}",
                )
            )
    return tuple(cases)


def audin_decide(m: int) -> AudinReport:
    """Decide the minimal-Maslov-period question for an oriented monotone
    torus of dimension m: every even candidate period >= 4 is excluded, for
    odd m after doubling to the product torus in dimension 2m (an even
    dimension has no escapes because an even period cannot divide m + 1)."""
    if m < 2:
        raise ValueError("torus dimension must be >= 2")
    cases = _audin_cases(m)
    resolution = None
    escapes = [case for case in cases if case.status == "escape"]
    if m % 2 == 1 and any((m + 1) % case.sigma == 0 for case in cases):
        resolution = audin_decide(2 * m)
        assert not [case for case in resolution.cases if case.status == "escape"]
    if escapes and resolution is None:
        raise AssertionError(f"unresolved escape cases for even m = {m}")
    return AudinReport(m=m, cases=cases, resolution=resolution, verdict=2)
