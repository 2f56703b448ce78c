"""Monomial-ideal calculus for the orderly blowup.

Adjusting parameters are modeled as monomials in named variables; the
disorderly ideal of a parameter list is the product over all nonempty
subsets of the ideals those subsets generate.  The blowup of a family along
this ideal is trivial exactly when the ideal is principal, which happens
exactly when the parameters are fully ordered by divisibility.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Optional, Sequence


@dataclass(frozen=True)
class Monomial:
    """Exponent vector over a fixed tuple of variable names."""

    variables: tuple
    exponents: tuple

    def __init__(self, variables: Sequence[str], exponents: Sequence[int]):
        variables = tuple(variables)
        exponents = tuple(int(e) for e in exponents)
        if len(variables) != len(exponents):
            raise ValueError("one exponent per variable required")
        if any(e < 0 for e in exponents):
            raise ValueError("exponents must be nonnegative")
        object.__setattr__(self, "variables", variables)
        object.__setattr__(self, "exponents", exponents)

    @classmethod
    def parse(cls, text: str, variables: Sequence[str]) -> "Monomial":
        """Parse products like ``x^2*y`` over the given variables."""
        variables = tuple(variables)
        exps = {v: 0 for v in variables}
        text = text.strip()
        if text not in ("", "1"):
            for factor in text.replace(" ", "").split("*"):
                if "^" in factor:
                    name, power = factor.split("^")
                    exps[name] += int(power)
                else:
                    exps[factor] += 1
        return cls(variables, tuple(exps[v] for v in variables))

    def is_unit(self) -> bool:
        return not any(self.exponents)

    def divides(self, other: "Monomial") -> bool:
        return all(a <= b for a, b in zip(self.exponents, other.exponents))

    def __mul__(self, other: "Monomial") -> "Monomial":
        if self.variables != other.variables:
            raise ValueError("variable sets differ")
        return Monomial(
            self.variables,
            tuple(a + b for a, b in zip(self.exponents, other.exponents)),
        )

    def __str__(self):
        parts = []
        for v, e in zip(self.variables, self.exponents):
            if e == 1:
                parts.append(v)
            elif e > 1:
                parts.append("%s^%d" % (v, e))
        return "*".join(parts) if parts else "1"


def _minimalize(monomials) -> tuple:
    """Antichain of minimal elements under divisibility, sorted by exponents."""
    unique = sorted(set((m.variables, m.exponents) for m in monomials))
    mons = [Monomial(v, e) for v, e in unique]
    keep = []
    for m in mons:
        if not any(other.divides(m) for other in mons if other.exponents != m.exponents):
            keep.append(m)
    return tuple(sorted(keep, key=lambda m: m.exponents))


@dataclass(frozen=True)
class MonomialIdeal:
    """Finite antichain of minimal monomial generators."""

    generators: tuple

    def __init__(self, generators):
        gens = list(generators)
        if not gens:
            raise ValueError("an ideal needs at least one generator")
        variables = gens[0].variables
        if any(g.variables != variables for g in gens):
            raise ValueError("variable sets differ")
        object.__setattr__(self, "generators", _minimalize(gens))

    @property
    def variables(self) -> tuple:
        return self.generators[0].variables

    def __str__(self):
        return "(" + ", ".join(str(g) for g in self.generators) + ")"


def ideal_product(a: MonomialIdeal, b: MonomialIdeal) -> MonomialIdeal:
    """Minimal generators of the product ideal."""
    if a.variables != b.variables:
        raise ValueError("variable sets differ")
    return MonomialIdeal([x * y for x in a.generators for y in b.generators])


def is_principal(ideal: MonomialIdeal) -> Optional[Monomial]:
    """The single generator when the ideal is principal, else None."""
    if len(ideal.generators) == 1:
        return ideal.generators[0]
    return None


def disorderly_ideal(parameters, mode: str = "all_nonempty") -> MonomialIdeal:
    """Product of the subset ideals of a list of adjusting parameters.

    ``mode`` selects the subset range: ``all_nonempty`` (the definition),
    ``at_least_two``, or ``incomparable_pairs``; all three have the same
    principality, hence define the same blowup.  An empty subset range
    yields the unit ideal.
    """
    params = list(parameters)
    if not params:
        raise ValueError("need at least one adjusting parameter")
    variables = params[0].variables
    if any(p.is_unit() for p in params):
        raise ValueError("adjusting parameters must be non-units")
    if mode == "all_nonempty":
        subsets = [
            list(c)
            for size in range(1, len(params) + 1)
            for c in itertools.combinations(params, size)
        ]
    elif mode == "at_least_two":
        subsets = [
            list(c)
            for size in range(2, len(params) + 1)
            for c in itertools.combinations(params, size)
        ]
    elif mode == "incomparable_pairs":
        subsets = [
            [p, q]
            for p, q in itertools.combinations(params, 2)
            if not p.divides(q) and not q.divides(p)
        ]
    else:
        raise ValueError("unknown mode %r" % mode)
    unit = MonomialIdeal([Monomial(variables, (0,) * len(variables))])
    result = unit
    for subset in subsets:
        result = ideal_product(result, MonomialIdeal(subset))
    return result


def is_orderly(parameters) -> bool:
    """True iff divisibility fully orders the parameter list."""
    params = list(parameters)
    for p, q in itertools.combinations(params, 2):
        if not p.divides(q) and not q.divides(p):
            return False
    return True
