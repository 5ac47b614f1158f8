"""p-th power classes of rationals and their behaviour in every completion.

A class in Q*/Q*^p is stored as a factored positive integer with exponents
in [1, p-1] (``ResidueClass``).  For odd p the sign is never stored, since
-1 = (-1)^p is itself a p-th power.  On top of the canonical form this
module provides:

  * ``residue_symbol`` -- the symbol (q/l)_p, i.e. +1 iff q is a p-th power
    in the completion Q_l (l a prime or the archimedean place);
  * ``local_class`` -- coordinates (valuation mod p, unit index mod p) of a
    class in Q_l*/Q_l*^p when l = 1 (mod p), with the unit index taken as a
    discrete log against a chosen non-p-th-power generator;
  * ``is_prime`` -- deterministic Miller-Rabin below 3.317e24, documented
    strong-probable-prime heuristic above.

Everything here is a pure function on immutable values.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd

from .errors import DomainError, FactorizationError, ParameterError

# Witnesses proving primality for every n < 3_317_044_064_679_887_385_961_981
# (Sorenson-Webster).  Above that bound the same bases give a strong
# probable-prime test with no known counterexample.
_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)

DEFAULT_FACTOR_BOUND = 10**7


def is_prime(n: int) -> bool:
    """Primality of n >= 2; deterministic for n < 3.317e24, see module doc."""
    if n < 2:
        raise ParameterError(f"is_prime requires n >= 2, got {n}")
    for b in _MR_BASES:
        if n % b == 0:
            return n == b
    d, r = n - 1, 0
    while d % 2 == 0:
        d //= 2
        r += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x == 1 or x == n - 1:
            continue
        for _ in range(r - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def trial_factor(n: int, bound: int = DEFAULT_FACTOR_BOUND) -> dict[int, int]:
    """Factor |n| by trial division, failing loudly past the bound.

    Returns a prime -> exponent map ({} for n = +-1).  Inputs in scope are
    user-chosen small integers, so no heavier machinery is warranted.
    """
    if n == 0:
        raise DomainError("cannot factor 0")
    n = abs(n)
    factors: dict[int, int] = {}
    d = 2
    while d * d <= n:
        if d > bound:
            raise FactorizationError(
                f"unfactored part {n} has no prime divisor <= {bound}"
            )
        while n % d == 0:
            factors[d] = factors.get(d, 0) + 1
            n //= d
        d += 1 if d == 2 else 2
    if n > 1:
        factors[n] = factors.get(n, 0) + 1
    return factors


@dataclass(frozen=True)
class LocalPlace:
    """A completion of Q: a finite prime l, or the archimedean place."""

    ell: int | None  # None encodes the archimedean place

    @classmethod
    def finite(cls, ell: int) -> "LocalPlace":
        if ell < 2:
            raise ParameterError(f"finite place needs a prime >= 2, got {ell}")
        return cls(ell)

    @classmethod
    def archimedean(cls) -> "LocalPlace":
        return cls(None)

    @property
    def is_archimedean(self) -> bool:
        return self.ell is None

    def __str__(self) -> str:
        return "oo" if self.ell is None else str(self.ell)


@dataclass(frozen=True, order=True)
class LocalClass:
    """Coordinates of a class in Q_l*/Q_l*^p: (valuation mod p, unit index).

    The unit index is meaningful only when the unit quotient is nontrivial
    (l = 1 mod p, or l = p); otherwise it is fixed to 0.
    """

    valuation: int
    unit_index: int


@dataclass(frozen=True)
class ResidueClass:
    """Canonical representative of an element of Q*/Q*^p.

    ``factors`` is a sorted tuple of (prime, exponent) pairs with every
    exponent in [1, p-1]; the empty tuple is the identity class.  Two classes
    are equal iff p and the factor tuples coincide.
    """

    p: int
    factors: tuple[tuple[int, int], ...]

    def __post_init__(self):
        _check_exponent_prime(self.p)
        last = 1
        for prime, exp in self.factors:
            if prime <= last:
                raise ParameterError("factor list must be sorted by prime")
            if not 1 <= exp <= self.p - 1:
                raise ParameterError(
                    f"exponent of {prime} must lie in [1, {self.p - 1}], got {exp}"
                )
            last = prime

    @classmethod
    def identity(cls, p: int) -> "ResidueClass":
        return cls(p, ())

    @classmethod
    def from_exponents(cls, exponents: dict[int, int], p: int) -> "ResidueClass":
        """Reduce a prime -> exponent map to canonical form.

        Keys must be primes (checked cheaply, not for primality; go through
        ``canonicalize`` for untrusted input).
        """
        _check_exponent_prime(p)
        reduced = []
        for prime in sorted(exponents):
            if prime < 2:
                raise ParameterError(f"{prime} is not a prime")
            e = exponents[prime] % p
            if e:
                reduced.append((prime, e))
        return cls(p, tuple(reduced))

    @property
    def is_identity(self) -> bool:
        return not self.factors

    @property
    def factor_dict(self) -> dict[int, int]:
        return dict(self.factors)

    def exponent_of(self, prime: int) -> int:
        for q, e in self.factors:
            if q == prime:
                return e
        return 0

    def support(self) -> frozenset[int]:
        return frozenset(q for q, _ in self.factors)

    def value(self) -> int:
        """The canonical positive integer representative, prod prime^exp."""
        n = 1
        for prime, exp in self.factors:
            n *= prime**exp
        return n

    def __mul__(self, other: "ResidueClass") -> "ResidueClass":
        if self.p != other.p:
            raise ParameterError("cannot multiply classes with different p")
        merged = self.factor_dict
        for prime, exp in other.factors:
            merged[prime] = merged.get(prime, 0) + exp
        return ResidueClass.from_exponents(merged, self.p)

    def __pow__(self, n: int) -> "ResidueClass":
        return ResidueClass.from_exponents(
            {prime: exp * n for prime, exp in self.factors}, self.p
        )

    def inverse(self) -> "ResidueClass":
        return self**-1

    def __str__(self) -> str:
        if self.is_identity:
            return "1"
        return "*".join(
            str(q) if e == 1 else f"{q}^{e}" for q, e in self.factors
        )


def _check_exponent_prime(p: int) -> None:
    if p <= 3 or not is_prime(p):
        raise ParameterError(f"exponent p must be a prime > 3, got {p}")


def canonicalize(
    n: int | Fraction | dict[int, int],
    p: int,
    factor_bound: int = DEFAULT_FACTOR_BOUND,
) -> ResidueClass:
    """Canonical class of a nonzero rational (or prime -> exponent map).

    A group homomorphism from factored rationals under multiplication:
    exponents are reduced mod p and the sign is dropped (odd p).
    """
    _check_exponent_prime(p)
    if isinstance(n, dict):
        for prime in n:
            if prime < 2 or not is_prime(prime):
                raise ParameterError(f"factor map key {prime} is not prime")
        return ResidueClass.from_exponents(n, p)
    if n == 0:
        raise DomainError("0 has no class in Q*/Q*^p")
    if isinstance(n, Fraction):
        num = trial_factor(n.numerator, factor_bound)
        for prime, exp in trial_factor(n.denominator, factor_bound).items():
            num[prime] = num.get(prime, 0) - exp
        return ResidueClass.from_exponents(num, p)
    return ResidueClass.from_exponents(trial_factor(n, factor_bound), p)


def _unit_part_mod(q: ResidueClass, ell: int, modulus: int, group_order: int) -> int:
    """The prime-to-ell part of q reduced mod ``modulus``.

    Exponents are reduced mod the unit-group order so canonical classes and
    un-reduced powers give the same residue.
    """
    w = 1
    for prime, exp in q.factors:
        if prime != ell:
            w = w * pow(prime, exp % group_order, modulus) % modulus
    return w


def residue_symbol(
    q: ResidueClass, place: LocalPlace | int, p: int | None = None
) -> int:
    """The symbol (q/place)_p: +1 iff q is a p-th power in the completion.

    At the archimedean place the symbol is always +1 (p odd).  At a finite
    prime l the valuation must vanish mod p, and the unit part w is then a
    p-th power iff w^((l-1)/gcd(p, l-1)) = 1 mod l for l != p, and iff
    w^(p-1) = 1 mod p^2 for l = p.
    """
    if p is not None and p != q.p:
        raise ParameterError(f"class has p={q.p} but p={p} was requested")
    p = q.p
    if isinstance(place, int):
        place = LocalPlace.finite(place)
    if place.is_archimedean:
        return 1
    ell = place.ell
    if q.exponent_of(ell) % p != 0:
        return -1
    if ell == p:
        w = _unit_part_mod(q, ell, p * p, p * (p - 1))
        return 1 if pow(w, p - 1, p * p) == 1 else -1
    w = _unit_part_mod(q, ell, ell, ell - 1)
    return 1 if pow(w, (ell - 1) // gcd(p, ell - 1), ell) == 1 else -1


def local_class(
    q: ResidueClass, ell: int, p: int | None = None, generator: int = 3
) -> LocalClass:
    """Coordinates of q in Q_l*/Q_l*^p for l = 1 (mod p).

    The valuation coordinate is v_l(q) mod p.  The unit index is the i in
    Z/p with generator^(i*(l-1)/p) = w^((l-1)/p) mod l, where w is the unit
    part of q; it is found by enumeration (p is small).  The generator must
    not itself be a p-th power mod l.
    """
    if p is not None and p != q.p:
        raise ParameterError(f"class has p={q.p} but p={p} was requested")
    p = q.p
    if ell % p != 1:
        raise ParameterError(
            f"local coordinates need ell = 1 (mod p); got ell={ell}, p={p}"
        )
    gpow = pow(generator % ell, (ell - 1) // p, ell)
    if gpow == 1:
        raise ParameterError(
            f"generator {generator} is a p-th power mod {ell}"
        )
    target = pow(_unit_part_mod(q, ell, ell, ell - 1), (ell - 1) // p, ell)
    acc = 1
    for index in range(p):
        if acc == target:
            return LocalClass(q.exponent_of(ell) % p, index)
        acc = acc * gpow % ell
    # Unreachable: gpow generates the p-th roots of unity mod ell.
    raise ParameterError(
        f"unit part of {q} not in the subgroup generated by {generator} mod {ell}"
    )
