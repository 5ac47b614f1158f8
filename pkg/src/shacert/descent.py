"""Curve family, descent images of its rational p-torsion, and torsor models.

The curves are C: y^p = x(x - e1)(x - e2) with e1 = 3uk, e2 = 9vk, of genus
g = p-1.  The Jacobian has rational p-torsion generated by the divisor
classes D0 = [(0,0) - oo] and D1 = [(e1,0) - oo] (with D2 = [(e2,0) - oo]
= -D0 - D1).  The descent maps evaluated on that torsion take values in
Q*/Q*^p and are computed from the closed forms

    H-image of D0 = [ (e1*e2)^-1, -e1 ],
    H-image of D1 = [ e1, (e1*(e1-e2))^-1 ],

extended to a*D0 + b*D1 multiplicatively.  Where a divisor sits on a zero of
the defining function (always the case for the third branch point), the
value is recovered from the product-one relation
image_D0 * image_D1 * image_D2 = 1.

``emit_models`` renders the affine torsor model: g superelliptic equations
plus the twisted product equation q*z^p = prod_i x_i(x_i - e1).
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from .errors import ParameterError, SingularCurveError
from .kummer import ResidueClass, canonicalize, is_prime, trial_factor


@dataclass(frozen=True)
class CurveFamily:
    """Parameters (p, u, v, k) of y^p = x(x-3uk)(x-9vk), k given by its primes."""

    p: int
    u: int
    v: int
    k_primes: tuple[int, ...] = ()

    def __post_init__(self):
        canonicalize(1, self.p)  # validates p
        if self.u == 0 or self.v == 0:
            raise ParameterError("u and v must be nonzero")
        if self.u % 3 == 0 or self.v % 3 == 0:
            raise SingularCurveError("3 must not divide u or v")
        if self.u == 3 * self.v:
            raise SingularCurveError("u = 3v collapses two branch points")
        if len(set(self.k_primes)) != len(self.k_primes):
            raise ParameterError("k must be squarefree: repeated prime in k_primes")
        for q in self.k_primes:
            if q < 2 or not is_prime(q):
                raise ParameterError(f"k_primes entry {q} is not prime")

    @property
    def k(self) -> int:
        n = 1
        for q in self.k_primes:
            n *= q
        return n

    @property
    def e1(self) -> int:
        return 3 * self.u * self.k

    @property
    def e2(self) -> int:
        return 9 * self.v * self.k

    @property
    def genus(self) -> int:
        return self.p - 1

    def _k_exponents(self, multiple: int = 1) -> dict[int, int]:
        return {q: multiple for q in self.k_primes}

    def _class_of(self, extra: dict[int, int], *ints: int) -> ResidueClass:
        """Class of (prod ints) * (primes in ``extra``); signs are dropped."""
        exps = dict(extra)
        for n in ints:
            for prime, e in trial_factor(n).items():
                exps[prime] = exps.get(prime, 0) + e
        return canonicalize(exps, self.p)

    def class_e1(self) -> ResidueClass:
        return self._class_of(self._k_exponents(), 3, self.u)

    def class_e2(self) -> ResidueClass:
        return self._class_of(self._k_exponents(), 9, self.v)

    def class_e1_minus_e2(self) -> ResidueClass:
        # e1 - e2 = 3k(u - 3v)
        return self._class_of(self._k_exponents(), 3, self.u - 3 * self.v)


@dataclass(frozen=True)
class TorsionElement:
    """The p-torsion point a*D0 + b*D1, stored by its (Z/p)^2 coordinates."""

    a: int
    b: int


@dataclass(frozen=True)
class KummerPair:
    """An element of (Q*/Q*^p)^2, the codomain of the two-component map."""

    first: ResidueClass
    second: ResidueClass

    def __post_init__(self):
        if self.first.p != self.second.p:
            raise ParameterError("pair components must share the same p")

    def product(self) -> ResidueClass:
        return self.first * self.second


@lru_cache(maxsize=256)
def _generator_images(curve: CurveFamily) -> tuple[KummerPair, KummerPair]:
    e1 = curve.class_e1()
    e2 = curve.class_e2()
    d = curve.class_e1_minus_e2()
    g0 = KummerPair((e1 * e2).inverse(), e1)  # [-e1] = [e1]: sign dropped
    g1 = KummerPair(e1, (e1 * d).inverse())
    return g0, g1


def torsion_image_H(elt: TorsionElement, curve: CurveFamily) -> KummerPair:
    """Two-component descent image of a*D0 + b*D1, canonicalized."""
    g0, g1 = _generator_images(curve)
    return KummerPair(
        g0.first**elt.a * g1.first**elt.b,
        g0.second**elt.a * g1.second**elt.b,
    )


def torsion_image_Di(elt: TorsionElement, i: int, curve: CurveFamily) -> ResidueClass:
    """Single-component image attached to branch point i in {0, 1, 2}.

    i = 0 and i = 1 are the components of the two-component map; i = 2 is
    derived from the product-one relation, whose defining formula is never
    directly evaluable on this torsion.
    """
    if i not in (0, 1, 2):
        raise ParameterError(f"branch index must be 0, 1 or 2, got {i}")
    image = torsion_image_H(elt, curve)
    if i == 0:
        return image.first
    if i == 1:
        return image.second
    return image.product().inverse()


def torsion_image_D(elt: TorsionElement, curve: CurveFamily) -> ResidueClass:
    """Image under the one-component map: the product of the two components."""
    return torsion_image_H(elt, curve).product()


def _linear_term(var: str, e: int) -> str:
    if e > 0:
        return f"({var} - {e})"
    return f"({var} + {-e})"


@dataclass(frozen=True)
class TorsorEquations:
    """The g+1 affine equations of the twisted cover with parameter q.

    The twist equal to the identity class gives the distinguished cover
    (plain z^p on the left of the last equation).
    """

    curve: CurveFamily
    twist: ResidueClass

    def __post_init__(self):
        if self.twist.p != self.curve.p:
            raise ParameterError("twist and curve must share the same p")

    @property
    def count(self) -> int:
        return self.curve.genus + 1

    def lines(self) -> tuple[str, ...]:
        """Stable, byte-deterministic text rendering, one equation per line."""
        p, g = self.curve.p, self.curve.genus
        e1, e2 = self.curve.e1, self.curve.e2
        out = [
            f"y_{i}^{p} = x_{i}*{_linear_term(f'x_{i}', e1)}*{_linear_term(f'x_{i}', e2)}"
            for i in range(1, g + 1)
        ]
        rhs = "*".join(
            f"x_{i}*{_linear_term(f'x_{i}', e1)}" for i in range(1, g + 1)
        )
        lhs = f"z^{p}" if self.twist.is_identity else f"{self.twist.value()}*z^{p}"
        out.append(f"{lhs} = {rhs}")
        return tuple(out)

    def render(self) -> str:
        return "\n".join(self.lines()) + "\n"


def emit_models(curve: CurveFamily, twist: ResidueClass) -> TorsorEquations:
    """Equations of the cover of the Jacobian twisted by ``twist``."""
    return TorsorEquations(curve, twist)
