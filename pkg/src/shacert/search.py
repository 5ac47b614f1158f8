"""Ramified set and admissible-prime-tuple search.

A tuple p_1 < ... < p_t is admissible for (p, u, v) when every p_i avoids
the ramified set U (the primes dividing 3*p*u*v*(u-3v)) and

  (1) p_i and p_j are p-th powers modulo each other for i != j,
  (2) p_i is a p-th power in Q_q for every q in U,
  (3) every q in U \\ {3} is a p-th power in Q_{p_i},
  (4) 3 is NOT a p-th power in Q_{p_i}.

The search scans candidates = 1 (mod p) in increasing order and commits
greedily, so results are deterministic for fixed parameters.  Candidates are
sieved by 1 mod p only; the stronger requirement at q = p (condition (2),
equivalent to candidate^(p-1) = 1 mod p^2) is checked explicitly.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import ParameterError, SearchExhausted, SingularCurveError
from .kummer import (
    LocalPlace,
    canonicalize,
    is_prime,
    residue_symbol,
    trial_factor,
)

DEFAULT_LIMIT = 10**8


@dataclass(frozen=True)
class SearchParams:
    """Inputs of the tuple search; ``limit`` caps the candidate value scanned."""

    p: int
    u: int
    v: int
    t: int
    start: int = 2
    limit: int = DEFAULT_LIMIT

    def __post_init__(self):
        if self.p <= 3 or not is_prime(self.p):
            raise ParameterError(f"p must be a prime > 3, got {self.p}")
        if self.u == 0 or self.v == 0:
            raise ParameterError("u and v must be nonzero")
        if self.u % 3 == 0:
            raise SingularCurveError(f"3 divides u = {self.u}")
        if self.v % 3 == 0:
            raise SingularCurveError(f"3 divides v = {self.v}")
        if self.u == 3 * self.v:
            raise SingularCurveError(
                f"u = 3v makes the branch points collide (u={self.u}, v={self.v})"
            )
        if self.t < 0:
            raise ParameterError(f"tuple length t must be >= 0, got {self.t}")
        if self.start < 2:
            raise ParameterError(f"start must be >= 2, got {self.start}")
        if self.limit < self.start:
            raise ParameterError("limit must be >= start")


@dataclass(frozen=True)
class ConditionCheck:
    """One residue-symbol (or congruence) check with its outcome.

    ``condition`` is "congruence" or one of "1".."4"; ``base`` is the number
    tested for p-th power-ness, ``place`` the completion it is tested in.
    For the congruence entry, ``got``/``need`` hold residues mod p instead
    of symbol values.
    """

    condition: str
    base: int
    place: int
    got: int
    need: int

    @property
    def ok(self) -> bool:
        return self.got == self.need


@dataclass(frozen=True)
class AdmissibleTuple:
    """A verified tuple with the evidence for every condition instance."""

    params: SearchParams
    primes: tuple[int, ...]
    ramified: frozenset[int]
    evidence: tuple[ConditionCheck, ...] = field(repr=False)

    @property
    def k(self) -> int:
        n = 1
        for q in self.primes:
            n *= q
        return n

    @property
    def all_ok(self) -> bool:
        return all(c.ok for c in self.evidence)


def build_ramified_set(p: int, u: int, v: int) -> frozenset[int]:
    """The primes dividing 3*p*u*v*(u-3v); always contains 3 and p."""
    SearchParams(p, u, v, t=0)  # reuse the parameter validation
    return frozenset(trial_factor(3 * p * u * v * (u - 3 * v)))


def _symbol_of_prime_at(base: int, place: int, p: int) -> int:
    return residue_symbol(canonicalize({base: 1}, p), LocalPlace.finite(place), p)


def is_admissible(
    candidate: int,
    accepted: list[int] | tuple[int, ...],
    ramified: frozenset[int] | set[int],
    p: int,
    short_circuit: bool = True,
) -> tuple[bool, list[ConditionCheck]]:
    """Test one candidate prime against conditions (1)-(4), with a report.

    ``accepted`` are the previously committed primes (already pairwise
    admissible).  With ``short_circuit`` off, every check is evaluated even
    after a failure, which is what full re-verification wants.
    """
    if candidate in ramified:
        raise ParameterError(f"candidate {candidate} lies in the ramified set")
    report: list[ConditionCheck] = []
    ok = True

    def record(check: ConditionCheck) -> bool:
        nonlocal ok
        report.append(check)
        ok = ok and check.ok
        return ok

    # candidate = 1 (mod p) is forced: otherwise every unit mod candidate is
    # a p-th power and condition (4) is unsatisfiable.
    record(ConditionCheck("congruence", candidate, p, candidate % p, 1))
    if not ok and short_circuit:
        return False, report
    for q in sorted(ramified):
        record(ConditionCheck("2", candidate, q, _symbol_of_prime_at(candidate, q, p), 1))
        if not ok and short_circuit:
            return False, report
    for q in sorted(ramified - {3}):
        record(ConditionCheck("3", q, candidate, _symbol_of_prime_at(q, candidate, p), 1))
        if not ok and short_circuit:
            return False, report
    record(ConditionCheck("4", 3, candidate, _symbol_of_prime_at(3, candidate, p), -1))
    if not ok and short_circuit:
        return False, report
    for a in accepted:
        record(ConditionCheck("1", candidate, a, _symbol_of_prime_at(candidate, a, p), 1))
        if not ok and short_circuit:
            return False, report
        record(ConditionCheck("1", a, candidate, _symbol_of_prime_at(a, candidate, p), 1))
        if not ok and short_circuit:
            return False, report
    return ok, report


def search_tuple(params: SearchParams) -> AdmissibleTuple:
    """Greedy deterministic scan for t admissible primes in [start, limit]."""
    p = params.p
    ramified = build_ramified_set(p, params.u, params.v)
    accepted: list[int] = []
    evidence: list[ConditionCheck] = []

    n = params.start + (1 - params.start) % p  # smallest n >= start with n = 1 (mod p)
    psq = p * p
    small_u = min(sorted(ramified - {3}), default=None)
    while len(accepted) < params.t and n <= params.limit:
        if n not in ramified and n > 1:
            # Cheap filters first; full report only for surviving candidates.
            if pow(n % psq, p - 1, psq) == 1:  # condition (2) at q = p
                if small_u is None or pow(small_u, (n - 1) // p, n) == 1:
                    if is_prime(n):
                        ok, report = is_admissible(n, accepted, ramified, p)
                        if ok:
                            accepted.append(n)
                            evidence.extend(report)
        n += p
    if len(accepted) < params.t:
        raise SearchExhausted(
            f"found {len(accepted)} of {params.t} admissible primes below {params.limit}",
            found=len(accepted),
            needed=params.t,
        )
    return AdmissibleTuple(params, tuple(accepted), ramified, tuple(evidence))


def reverify_tuple(
    primes: tuple[int, ...] | list[int],
    ramified: frozenset[int] | set[int],
    p: int,
) -> tuple[bool, list[ConditionCheck]]:
    """Re-derive the full evidence table for a given tuple, from scratch.

    This is deliberately a separate code path from the incremental search:
    it takes the primes as data, re-checks primality and every condition
    instance (never short-circuiting), and reports all outcomes.
    """
    evidence: list[ConditionCheck] = []
    ok = True
    seen: list[int] = []
    for q in primes:
        if q < 2 or not is_prime(q):
            raise ParameterError(f"tuple entry {q} is not prime")
        good, report = is_admissible(q, seen, ramified, p, short_circuit=False)
        ok = ok and good
        evidence.extend(report)
        seen.append(q)
    return ok, evidence
