"""Beta-expansions and canonical number systems, and their conjugacies with tau.

A Pisot-type beta system with minimal polynomial (X - beta) * chi_r(X) is
conjugate to tau_r through z -> {r z}; a polynomial P with p_0 >= 2 gives a
backward division map that is conjugate to tau_r on the Brunotte module.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from . import poly
from .core import ParamVector, tau
from .errors import (
    InvalidCnsPolynomial,
    NotInBrunotteModule,
    NotInSchurCohn,
    NotMonic,
    OutOfRange,
    RootNotGreaterThanOne,
    UnsupportedDimension,
)
from .exactnum import as_element, field_make, floor, frac
from .regions import schur_cohn_contains
from .witness import DEFAULT_MAX_WITNESS, decide_finiteness, require_schur_cohn


class BetaSystem:
    """beta > 1 given by its minimal polynomial and an isolating interval."""

    def __init__(self, min_poly, root_interval):
        coeffs = poly.trim([Fraction(c) for c in min_poly])
        if any(c.denominator != 1 for c in coeffs) or coeffs[-1] != 1:
            raise NotMonic("beta must be an algebraic integer with a monic integer minimal polynomial")
        if len(coeffs) < 3:
            raise UnsupportedDimension("beta must have degree at least 2")
        self.beta_min_poly = tuple(int(c) for c in coeffs)
        self.field = field_make(self.beta_min_poly, root_interval)
        self.beta = self.field.gen()
        if not self.beta > 1:
            raise RootNotGreaterThanOne(f"isolated root is not greater than 1: {self.field.spec()}")
        d = len(coeffs) - 2
        # synthetic division by (X - beta): q_d = 1, q_{j-1} = b_j + beta q_j
        q = [None] * (d + 1)
        q[d] = self.field.element([1])
        for j in range(d, 0, -1):
            q[j - 1] = q[j] * self.beta + coeffs[j]
        self.r = ParamVector(q[:d], self.field)
        self.alphabet = tuple(range(floor(self.beta) + 1))
        self._check_factorization()

    def _check_factorization(self):
        chi = self.r.char_poly()
        prod = poly.mul([-self.beta, self.field.element([1])], chi)
        if any(a != b for a, b in zip(prod, self.beta_min_poly)) or len(prod) != len(self.beta_min_poly):
            raise AssertionError("(X - beta) chi_r differs from the minimal polynomial")

    @property
    def d(self):
        return self.r.d

    def __repr__(self):
        return f"BetaSystem({poly.to_text(self.beta_min_poly)}, r={self.r})"


def beta_from_minpoly(min_poly, root_interval):
    return BetaSystem(min_poly, root_interval)


def _check_unit_interval(gamma):
    if not (0 <= gamma < 1):
        raise OutOfRange(f"{gamma} is not in [0, 1)")


def beta_transform(bs, gamma):
    """T_beta(gamma) = {beta gamma}."""
    gamma = as_element(gamma)
    _check_unit_interval(gamma)
    return frac(bs.beta * gamma)


def phi_map(bs, z):
    """The conjugacy z -> {r z} into Z[beta] intersected with [0, 1)."""
    return frac(bs.r.dot(z))


def beta_digits(bs, gamma, length):
    """Greedy digits a_i = floor(beta T^(i-1)(gamma)) for i = 1..length."""
    gamma = as_element(gamma)
    _check_unit_interval(gamma)
    digits = []
    for _ in range(length):
        x = bs.beta * gamma
        a = floor(x)
        digits.append(a)
        gamma = x - a
    return digits


def greedy_remainders(bs, gamma, digits):
    """gamma - sum_{i<=n} a_i beta^-i for each prefix; all lie in [0, beta^-n)."""
    gamma = as_element(gamma)
    inv = bs.beta.inverse()
    out = []
    acc = gamma
    scale = bs.field.element([1])
    for a in digits:
        scale = scale * inv
        acc = acc - a * scale
        out.append((acc, scale))
    return out


def property_F(bs, max_witness=DEFAULT_MAX_WITNESS):
    """Finite greedy expansions for Z[beta] and [0, 1), decided on tau_r.

    Raises NotInSchurCohn when beta is not a Pisot number.
    """
    require_schur_cohn(bs.r)
    return decide_finiteness(bs.r, max_witness).finite


# canonical number systems


@dataclass(frozen=True)
class RingElement:
    """B = sum b_i x^i in Z[X] / P Z[X], as an integer coefficient vector."""

    coeffs: tuple

    def __bool__(self):
        return any(self.coeffs)


class CnsSystem:
    """P = p_d X^d + ... + p_0 with p_0 >= 2, digits 0..p_0 - 1."""

    def __init__(self, coeffs):
        p = [Fraction(c) for c in coeffs]
        if any(c.denominator != 1 for c in p):
            raise InvalidCnsPolynomial("coefficients must be integers")
        p = [int(c) for c in poly.trim(p)]
        if len(p) < 2:
            raise InvalidCnsPolynomial("P must have degree at least 1")
        if p[0] < 2:
            raise InvalidCnsPolynomial(f"need p_0 >= 2, got {p[0]}")
        self.P = tuple(p)
        self.d = len(p) - 1
        self.p0 = p[0]
        self.digits = tuple(range(p[0]))
        self.monic = abs(p[-1]) == 1
        self.r = ParamVector([Fraction(p[self.d - j], p[0]) for j in range(self.d)])

    def __repr__(self):
        return f"CnsSystem({poly.to_text(self.P)})"

    def element(self, coeffs):
        """Canonical form: reduced below degree d for monic P, raw otherwise."""
        c = [int(v) for v in coeffs]
        if self.monic and len(c) > self.d:
            _, rem = poly.divmod_poly(c, list(self.P))
            c = [int(v) for v in rem]
        while c and c[-1] == 0:
            c.pop()
        return RingElement(tuple(c))

    def is_zero(self, B):
        """Exact test that P divides B in Z[X]."""
        c = list(B.coeffs)
        if not any(c):
            return True
        q, rem = poly.divmod_poly(c, list(self.P))
        return not rem and all(Fraction(v).denominator == 1 for v in q)

    def equal(self, A, B):
        n = max(len(A.coeffs), len(B.coeffs))
        a = list(A.coeffs) + [0] * (n - len(A.coeffs))
        b = list(B.coeffs) + [0] * (n - len(B.coeffs))
        return self.is_zero(RingElement(tuple(x - y for x, y in zip(a, b))))

    def basis(self):
        """Brunotte basis w_k = p_d x^k + p_{d-1} x^(k-1) + ... + p_{d-k}."""
        P, d = self.P, self.d
        return [tuple(P[d - k + i] for i in range(k + 1)) for k in range(d)]


def backward_divide(cs, B):
    """(c_0, D_P(B)) with B = c_0 + x D_P(B) and c_0 in the digit set."""
    b = list(B.coeffs) or [0]
    P = cs.P
    q = b[0] // cs.p0
    digit = b[0] - q * cs.p0
    n = max(len(b) - 1, cs.d)
    out = [0] * n
    for i in range(len(b) - 1):
        out[i] += b[i + 1]
    for i in range(cs.d):
        out[i] -= q * P[i + 1]
    return digit, cs.element(out)


def cns_expansion(cs, B, max_steps):
    """Digits from repeated backward division; finite is True once the remainder is 0."""
    digits = []
    for _ in range(max_steps):
        if cs.is_zero(B):
            return digits, True
        c, B = backward_divide(cs, B)
        digits.append(c)
    return digits, cs.is_zero(B)


def psi_inverse(cs, z):
    """sum z_k w_k in the Brunotte module."""
    if len(z) != cs.d:
        raise ValueError(f"expected a vector of length {cs.d}")
    acc = [0] * cs.d
    for zk, w in zip(z, cs.basis()):
        for i, c in enumerate(w):
            acc[i] += zk * c
    return cs.element(acc)


def psi(cs, B):
    """Brunotte coordinates of B; NotInBrunotteModule if B is outside the module."""
    c = [Fraction(v) for v in B.coeffs]
    if len(c) > cs.d:
        _, c = poly.divmod_poly(c, list(cs.P))
    c = list(c) + [Fraction(0)] * (cs.d - len(c))
    P, d = cs.P, cs.d
    z = [0] * d
    # w_k has top coefficient p_d at degree k: solve from the top degree down
    for k in range(d - 1, -1, -1):
        coef = c[k]
        for j in range(k + 1, d):
            coef -= z[j] * P[d - j + k]
        v = coef / P[d]
        if v.denominator != 1:
            raise NotInBrunotteModule(f"{list(B.coeffs)} is not in the Brunotte module")
        z[k] = int(v)
    if not cs.equal(B, psi_inverse(cs, z)):
        raise NotInBrunotteModule(f"{list(B.coeffs)} is not in the Brunotte module")
    return tuple(z)


def brunotte_step(cs, z):
    """D_P on Brunotte coordinates, computed in the ring."""
    _, B = backward_divide(cs, psi_inverse(cs, z))
    return psi(cs, B)


def kovacs_applies(P):
    """Monic irreducible P with p_0 >= p_1 >= ... >= p_{d-1} > 0 and p_0 >= 2."""
    P = list(P)
    d = len(P) - 1
    if P[-1] != 1 or P[0] < 2 or d < 1:
        return False
    chain = P[:d]
    if any(a < b for a, b in zip(chain, chain[1:])) or chain[-1] <= 0:
        return False
    return poly.is_irreducible(P)


@dataclass(frozen=True)
class CnsVerdict:
    is_cns: bool
    reason: str
    kovacs: bool | None
    cycle: list | None = None

    def to_json(self):
        out = {"cns": self.is_cns, "reason": self.reason, "kovacs": self.kovacs}
        if self.cycle is not None:
            out["cycle"] = self.cycle
        return out


def decide_cns(P, max_witness=DEFAULT_MAX_WITNESS):
    """CNS decision through the finiteness of tau_r, cross-checked by Kovacs' criterion."""
    cs = P if isinstance(P, CnsSystem) else CnsSystem(P)
    kov = True if kovacs_applies(cs.P) else None
    if not schur_cohn_contains(cs.r).inside:
        verdict = CnsVerdict(False, "not expanding", kov)
    else:
        try:
            res = decide_finiteness(cs.r, max_witness)
        except NotInSchurCohn:
            verdict = CnsVerdict(False, "not expanding", kov)
        else:
            cycle = res.cycle.to_json() if res.cycle is not None else None
            verdict = CnsVerdict(res.finite, "finiteness of tau_r", kov, cycle)
    if kov and not verdict.is_cns:
        raise AssertionError(f"Kovacs criterion and SRS decision disagree for {cs}")
    return verdict


def is_cns(P, max_witness=DEFAULT_MAX_WITNESS):
    return decide_cns(P, max_witness).is_cns


def check_brunotte_conjugacy(cs, z):
    """D_P(Psi^-1(z)) equals Psi^-1(tau_r(z)) in the ring."""
    _, lhs = backward_divide(cs, psi_inverse(cs, z))
    rhs = psi_inverse(cs, tau(cs.r, z))
    return cs.equal(lhs, rhs)
