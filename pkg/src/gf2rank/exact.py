"""Exactly computable parity and null-count probabilities.

Everything here has two faces:

* an arbitrary-precision evaluation (mpmath, default 256 bits) with an
  automatic retry at doubled precision whenever the rounding-error bound on
  the sum is too large relative to the result -- the alternating
  ``(2 p_j - 1)^m`` sums cancel catastrophically in doubles already for a few
  hundred columns, and
* an exact-rational evaluation (``exact=True``) used by the oracle tests,
  built on ``fractions.Fraction`` and exact big-integer binomials.

Probabilities of the all-even event are computed for both row models: the
binomial allocation scheme (balls into urns, closed pgf form) and the exact
uniform-support scheme (hypergeometric even-overlap sums).
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from math import comb

import mpmath as mp

from .errors import (
    InvalidParam,
    NumericalResidue,
    PrecisionLoss,
    TruncationTooSmall,
)
from .weights import WeightDist

DEFAULT_PRECISION = 256
_MAX_PRECISION = 1 << 14
_REL_TOL = 1e-15
_TAIL_TOL = mp.mpf("1e-20")


def _exact_fraction(p) -> Fraction:
    # float -> Fraction is exact (binary rationals), so this loses nothing.
    return p if isinstance(p, Fraction) else Fraction(p)


def _guarded_sum(term_factory, precision: int, amplification: int = 0):
    """Sum terms at increasing precision until the rounding bound is small.

    ``term_factory()`` yields mpf terms under the current working precision.
    The error bound is (#terms + amplification) ulps of the absolute sum; if
    it exceeds _REL_TOL relative to the result, the precision is doubled, up
    to a hard cap, after which PrecisionLoss is raised.  A total of exactly
    zero at two successive precisions is accepted as a true zero (the inputs
    are dyadic rationals, so exact cancellation is real and doubling cannot
    certify it any further).
    """
    prec = precision
    zero_seen = False
    while True:
        with mp.workprec(prec):
            total = mp.mpf(0)
            abs_total = mp.mpf(0)
            count = 0
            for t in term_factory():
                total += t
                abs_total += abs(t)
                count += 1
            bound = abs_total * mp.mpf(2) ** (4 - prec) * (count + amplification + 1)
            if bound == 0 or (total != 0 and bound <= _REL_TOL * abs(total)):
                return +total
            if total == 0:
                if zero_seen:
                    return total
                zero_seen = True
        if prec >= _MAX_PRECISION:
            raise PrecisionLoss(
                f"rounding bound {mp.nstr(bound, 5)} vs result {mp.nstr(total, 5)} "
                f"still above {_REL_TOL} relative at {prec} bits")
        prec *= 2


def _structurally_zero(m: int, weights) -> bool:
    # odd row count with purely odd weights: the total unit count is odd,
    # so the all-even event is impossible.
    return m % 2 == 1 and all(w % 2 == 1 for w in weights)


def pi_multinomial(n: int, m: int, dist: WeightDist, precision: int = DEFAULT_PRECISION,
                   exact: bool = False):
    """P[every column sum is even] in the binomial allocation scheme:
    2^-n * sum_j C(n,j) rho(1 - 2j/n)^m.

    For the point mass at weight 1 this is the classical probability that all
    n cells of a multinomial(m; 1/n, ..., 1/n) vector are even.
    """
    if n < 1 or m < 0:
        raise InvalidParam(f"need n >= 1, m >= 0; got n={n}, m={m}")
    if _structurally_zero(m, (k for k, _ in dist.atoms)):
        return Fraction(0) if exact else mp.mpf(0)
    if exact:
        atoms = [(k, _exact_fraction(p)) for k, p in dist.atoms]
        total = Fraction(0)
        for j in range(n + 1):
            s = Fraction(n - 2 * j, n)
            rho = sum(p * s**k for k, p in atoms)
            total += comb(n, j) * rho**m
        return total / 2**n

    def terms():
        half = mp.mpf(1) / 2
        for j in range(n + 1):
            s = 1 - 2 * mp.mpf(j) / n
            yield half**n * comb(n, j) * dist.pgf(s) ** m

    return _guarded_sum(terms, precision, amplification=m + n)


def hypergeometric_even_overlap(n: int, j: int, r: int) -> Fraction:
    """P[|H ∩ J| is even] for a uniform r-subset H and a fixed j-subset J of [n]."""
    num = sum(comb(r, i) * comb(n - r, j - i) for i in range(0, min(r, j) + 1, 2))
    return Fraction(num, comb(n, j))


def prob_A_general(n: int, m: int, law, precision: int = DEFAULT_PRECISION,
                   exact: bool = False):
    """P[every column sum is even] in the exact uniform-support scheme:
    2^-n * sum_j C(n,j) (2 p_j - 1)^m with hypergeometric even-overlap p_j.

    ``law`` is the per-n row-weight law as (weight, probability) pairs with
    support inside [1, n].  Weight 0 is tolerated (it contributes an overlap
    probability of 1), which makes the binomial per-n law usable here.
    """
    law = sorted((int(r), p) for r, p in law)
    if n < 1 or m < 0:
        raise InvalidParam(f"need n >= 1, m >= 0; got n={n}, m={m}")
    if not law or law[0][0] < 0 or law[-1][0] > n:
        raise InvalidParam(f"law support must lie in [0, {n}]: {law}")
    if _structurally_zero(m, (r for r, _ in law)):
        return Fraction(0) if exact else mp.mpf(0)

    frac_law = [(r, _exact_fraction(p)) for r, p in law]
    # 2 p_j - 1 held exactly; signs alternate in j, so no accuracy is lost
    # before the final big-int -> mpf conversions.
    q = []
    for j in range(n + 1):
        pj = sum(p * hypergeometric_even_overlap(n, j, r) for r, p in frac_law)
        q.append(2 * pj - 1)

    if exact:
        total = sum(comb(n, j) * q[j] ** m for j in range(n + 1))
        return total / Fraction(2) ** n

    def terms():
        half = mp.mpf(1) / 2
        for j in range(n + 1):
            qj = mp.mpf(q[j].numerator) / q[j].denominator
            yield half**n * comb(n, j) * qj**m

    return _guarded_sum(terms, precision, amplification=m + n)


def expected_null_count(n: int, m: int, dist: WeightDist, model: str = "exact",
                        precision: int = DEFAULT_PRECISION, exact: bool = False):
    """E[number of null vectors], including the zero vector, plus its
    decomposition by weight: E[N(n,m;l)] = C(m,l) P[A(n,l)].

    Returns (total, profile) where profile maps l to E[N(n,m;l)].
    """
    if m < 0:
        raise InvalidParam(f"m {m} < 0")
    if model == "exact":
        law = dist.per_n_law_exact(n)
        prob = lambda l: prob_A_general(n, l, law, precision=precision, exact=exact)
    elif model == "binomial":
        prob = lambda l: pi_multinomial(n, l, dist, precision=precision, exact=exact)
    else:
        raise InvalidParam(f"model {model!r} not in ('exact', 'binomial')")
    profile = {}
    total = Fraction(0) if exact else mp.mpf(0)
    for l in range(m + 1):
        e = comb(m, l) * prob(l)
        profile[l] = e
        total += e
    return total, profile


def poissonization_check(n: int, m: int, mu: float, truncation: int | None = None,
                         precision: int = DEFAULT_PRECISION):
    """Both sides of the Poissonization identity for the weight-1 model.

    lhs is the all-even multinomial probability pi_n(m); rhs rebuilds it as

        P[S_E = m] / P[S = m] * ((1 + e^{-2 mu}) / 2)^n,

    where S sums n i.i.d. Poisson(mu) variables and S_E sums n i.i.d.
    even-conditioned Poisson(mu) variables, both sum pmfs evaluated by
    dynamic-programming convolution of the truncated single-variable pmfs.
    """
    if n < 1 or m < 0 or mu <= 0:
        raise InvalidParam(f"need n >= 1, m >= 0, mu > 0; got {n}, {m}, {mu}")
    with mp.workprec(precision):
        mpmu = mp.mpf(mu)
        cut = truncation if truncation is not None else int(m + mpmu + 40 * mp.sqrt(mpmu) + 40)
        pmf = [mp.e**-mpmu * mpmu**k / mp.factorial(k) for k in range(cut + 1)]
        tail = 1 - mp.fsum(pmf)
        if tail > _TAIL_TOL:
            raise TruncationTooSmall(
                f"Poisson tail mass {mp.nstr(tail, 5)} beyond {cut} exceeds {_TAIL_TOL}")
        p_even = mp.e**-mpmu * mp.cosh(mpmu)
        pmf_even = [pmf[k] / p_even if k % 2 == 0 else mp.mpf(0) for k in range(cut + 1)]

        def conv_power_at(single, target):
            dp = [mp.mpf(1)] + [mp.mpf(0)] * target
            for _ in range(n):
                new = [mp.mpf(0)] * (target + 1)
                for t in range(target + 1):
                    acc = mp.mpf(0)
                    for k in range(0, min(t, cut) + 1):
                        if single[k]:
                            acc += dp[t - k] * single[k]
                    new[t] = acc
                dp = new
            return dp[target]

        ps = conv_power_at(pmf, m)
        pe = conv_power_at(pmf_even, m)
        rhs = (pe / ps) * ((1 + mp.e ** (-2 * mpmu)) / 2) ** n
    lhs = pi_multinomial(n, m, WeightDist.fixed(1), precision=precision)
    return lhs, rhs


# --- joint parities of multinomial counts --------------------------------

_CYCLOTOMIC = {
    2: (1, 1),
    3: (1, 1, 1),
    4: (1, 0, 1),
    5: (1, 1, 1, 1, 1),
    6: (1, -1, 1),
    7: (1, 1, 1, 1, 1, 1, 1),
    8: (1, 0, 0, 0, 1),
}  # ascending coefficients, monic; degree = len - 1

PARITY_MAX_K = 10
PARITY_MAX_R = 8


@dataclass(frozen=True)
class ParitySpec:
    """Joint congruence targets for k tracked events over i.i.d. trials.

    ``cell_probs[g]`` is the single-trial probability of the outcome cell
    indexed by the bitmask g (bit i set means event i occurs); ``targets[i]``
    is the required residue of the count of event i, modulo ``r``.
    """

    k: int
    r: int
    targets: tuple
    cell_probs: tuple

    def __post_init__(self):
        if not 1 <= self.k <= PARITY_MAX_K:
            raise InvalidParam(f"k {self.k} outside 1..{PARITY_MAX_K}")
        if not 2 <= self.r <= PARITY_MAX_R:
            raise InvalidParam(f"r {self.r} outside 2..{PARITY_MAX_R}")
        if len(self.targets) != self.k:
            raise InvalidParam(f"{len(self.targets)} targets for k={self.k}")
        if any(not 0 <= t < self.r for t in self.targets):
            raise InvalidParam(f"targets {self.targets} not all in 0..{self.r - 1}")
        if len(self.cell_probs) != 1 << self.k:
            raise InvalidParam(f"{len(self.cell_probs)} cell probabilities for k={self.k}")
        if any(p < 0 for p in self.cell_probs):
            raise InvalidParam("negative cell probability")
        total = sum(self.cell_probs)
        if all(isinstance(p, (int, Fraction)) for p in self.cell_probs):
            if total != 1:
                raise InvalidParam(f"exact cell probabilities sum to {total}")
        elif abs(total - 1.0) > 1e-12:
            raise InvalidParam(f"cell probabilities sum to {total!r}")


def _bit_dot(g: int, h) -> int:
    return sum(h[i] for i in range(len(h)) if (g >> i) & 1)


def _tuple_dot(t, h) -> int:
    return sum(a * b for a, b in zip(t, h))


class _Cyclotomic:
    """Exact arithmetic in Q(omega), omega a primitive r-th root of unity,
    on the power basis reduced by the r-th cyclotomic polynomial."""

    def __init__(self, r: int):
        phi = _CYCLOTOMIC[r]
        self.r = r
        self.d = len(phi) - 1
        # omega^d expressed on the basis
        top = [Fraction(-c) for c in phi[:-1]]
        self.top = top
        # omega^e for e = 0..r-1
        pows = [self.one()]
        for _ in range(r - 1):
            pows.append(self._shift(pows[-1]))
        self.omega_pow = pows

    def zero(self):
        return [Fraction(0)] * self.d

    def one(self):
        v = self.zero()
        v[0] = Fraction(1)
        return v

    def _shift(self, v):
        # multiply by omega
        out = [Fraction(0)] + v[:-1]
        carry = v[-1]
        if carry:
            out = [c + carry * t for c, t in zip(out, self.top)]
        return out

    def mul(self, a, b):
        full = [Fraction(0)] * (2 * self.d - 1)
        for i, ai in enumerate(a):
            if ai:
                for j, bj in enumerate(b):
                    if bj:
                        full[i + j] += ai * bj
        for e in range(2 * self.d - 2, self.d - 1, -1):
            c = full[e]
            if c:
                full[e] = Fraction(0)
                for i, t in enumerate(self.top):
                    full[e - self.d + i] += c * t
        return full[: self.d]

    def power(self, v, e: int):
        out = self.one()
        base = v
        while e:
            if e & 1:
                out = self.mul(out, base)
            base = self.mul(base, base)
            e >>= 1
        return out


def multinomial_parity(spec: ParitySpec, n: int, exact: bool = False):
    """P[count of event i = targets[i] (mod r) for every i] over n i.i.d. trials:
    r^-k sum_h omega^{-t.h} (sum_g omega^{g.h} p_g)^n.

    The float path works over complex doubles and discards an imaginary
    residue of at most 1e-12 (larger residues raise NumericalResidue).  The
    exact path runs the same formula in the cyclotomic field Q(omega) over
    rationals and returns a Fraction.
    """
    if n < 0:
        raise InvalidParam(f"n {n} < 0")
    k, r, t = spec.k, spec.r, spec.targets

    if exact:
        field = _Cyclotomic(r)
        probs = [_exact_fraction(p) for p in spec.cell_probs]
        total = field.zero()
        for h in product(range(r), repeat=k):
            inner = field.zero()
            for g, p in enumerate(probs):
                if p:
                    w = field.omega_pow[_bit_dot(g, h) % r]
                    inner = [c + p * wc for c, wc in zip(inner, w)]
            term = field.power(inner, n)
            shift = field.omega_pow[(-_tuple_dot(t, h)) % r]
            term = field.mul(term, shift)
            total = [a + b for a, b in zip(total, term)]
        scale = Fraction(1, r**k)
        total = [scale * c for c in total]
        if any(total[1:]):
            raise NumericalResidue(f"non-rational cyclotomic residue {total[1:]}")
        return total[0]

    om = [cmath.exp(2j * cmath.pi * j / r) for j in range(r)]
    total = 0j
    for h in product(range(r), repeat=k):
        inner = sum(p * om[_bit_dot(g, h) % r] for g, p in enumerate(spec.cell_probs))
        total += om[(-_tuple_dot(t, h)) % r] * inner**n
    total /= r**k
    if abs(total.imag) > 1e-12:
        raise NumericalResidue(f"imaginary residue {total.imag:.3e} exceeds 1e-12")
    return total.real


# --- dense uniform-nonzero rows over GF(q) --------------------------------

def _is_prime_power(q: int) -> bool:
    if q < 2:
        return False
    for p in range(2, math.isqrt(q) + 1):
        if q % p == 0:
            while q % p == 0:
                q //= p
            return q == 1
    return True


def gfq_dense_survival(q: int, r: int, n: int | None = None) -> float:
    """P[T_n > n + 1 - r] for i.i.d. rows uniform on nonzero GF(q)^n vectors.

    With n omitted, returns the n -> infinity limit prod_{j >= r} (1 - q^-j)
    (truncated once the factors are within 1e-16 of 1); with n given, the
    exact finite-n value (1 - q^-n)^(r-n) * prod_{j=r}^{n-1} (1 - q^-j).
    """
    if not _is_prime_power(q):
        raise InvalidParam(f"q {q} is not a prime power >= 2")
    if r < 0:
        raise InvalidParam(f"r {r} < 0")
    if n is None:
        if r == 0:
            return 0.0
        prod = 1.0
        j = r
        while True:
            f = float(q) ** -j
            prod *= 1.0 - f
            j += 1
            if f < 1e-16:
                return prod
    if not 1 <= r <= n:
        raise InvalidParam(f"need 1 <= r <= n; got r={r}, n={n}")
    prod = (1.0 - float(q) ** -n) ** (r - n)
    for j in range(r, n):
        prod *= 1.0 - float(q) ** -j
    return prod


def gfq_survival_lower_bound(q: int, r: int) -> float:
    """Uniform-in-n lower bound for P[T_n > n + 1 - r], 1 <= r <= n."""
    if not _is_prime_power(q):
        raise InvalidParam(f"q {q} is not a prime power >= 2")
    if r < 1:
        raise InvalidParam(f"r {r} < 1")
    if q == 2:
        return math.exp(-(4.0 / 3.0) * 2.0 ** (1 - r))
    return math.exp(-float(q) ** (1 - r))
