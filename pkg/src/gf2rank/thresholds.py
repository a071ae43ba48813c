"""Numerical evaluation of the analytic threshold machinery.

Everything is driven by four functions of the weight pgf rho:

* F(alpha) = log sup_gamma (1 + rho(1-2 gamma))^alpha / (2 gamma^gamma (1-gamma)^(1-gamma)),
  whose first zero-departure locates alpha_star (growth onset of the expected
  null-vector count);
* R(alpha), the same supremum with rho^alpha in place of (1 + rho)^alpha,
  giving the decay rate of the all-columns-even probability;
* h(x) = -log(1-x) / rho'(x) and psi(x) = x + (1 + rho(x)/rho'(x) - x) log(1-x),
  which control the 2-core: g_star(alpha) = sup{x : h(x) <= alpha} is the
  peeling survival parameter, alpha_sharp = inf h is the core-onset
  threshold, and alpha_bar (first alpha past alpha_sharp with
  psi(g_star(alpha)) < 0) is the onset of a core with more rows than
  occupied columns.

All one-dimensional optima use a dense bracket grid (log-refined toward the
interval ends) followed by golden-section or bisection refinement; nothing
assumes unimodality, since h and psi are genuinely multi-modal for mixture
weights.  The endpoint convention 0^0 = 1 is applied throughout.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import mpmath as mp

from .errors import Inconsistent, InvalidParam, NoConvergence
from .weights import WeightDist

TOL_F = 1e-12          # F > TOL_F counts as positive in the alpha_star bisection
ALPHA_TOL = 1e-12      # alpha-bisection resolution
GAMMA_TOL = 1e-12      # golden-section resolution in gamma
X_TOL = 1e-13          # golden/bisection resolution in x
GSTAR_TOL = 1e-12
ALPHA_BAR_TOL = 1e-9
ALPHA_BAR_STEP = 1e-4  # resolves sign windows a few 1e-4 wide (mixture cases)
ROUTE_TOL = 1e-6       # agreement required between independent alpha_star routes
PROMINENCE = 1e-10     # minimum depth for a local minimum to count as a jump
X_HI = 1.0 - 1e-15     # guard for log(1-x)

_INVPHI = (math.sqrt(5.0) - 1.0) / 2.0


# --- generic 1-d search helpers -------------------------------------------

def _golden_min(f, a: float, b: float, tol: float):
    while b - a > tol:
        c = b - _INVPHI * (b - a)
        d = a + _INVPHI * (b - a)
        if f(c) < f(d):
            b = d
        else:
            a = c
    x = 0.5 * (a + b)
    return x, f(x)


def _unit_grid(n: int, lo_exp: int = 44) -> tuple:
    pts = [i / n for i in range(1, n)]
    pts += [2.0**-e for e in range(int(math.log2(n)), lo_exp)]
    pts += [1.0 - 2.0**-e for e in range(int(math.log2(n)), lo_exp)]
    return tuple(sorted(set(pts)))


_X_GRID = _unit_grid(8192)
_GAMMA_GRID = tuple(0.5 * x for x in _unit_grid(2048, lo_exp=56)) + (0.0, 0.5)
_GAMMA_GRID = tuple(sorted(set(_GAMMA_GRID)))


# --- rate functions F and R ------------------------------------------------

def _xlogx(x: float) -> float:
    return x * math.log(x) if x > 0.0 else 0.0  # 0^0 = 1 convention


def F_gamma(dist: WeightDist, alpha: float, gamma: float) -> float:
    """log[(1 + rho(1-2 gamma))^alpha / (2 gamma^gamma (1-gamma)^(1-gamma))]."""
    if not 0.0 <= gamma <= 0.5:
        raise InvalidParam(f"gamma {gamma} outside [0, 1/2]")
    ent = _xlogx(gamma) + _xlogx(1.0 - gamma)
    return alpha * math.log1p(dist.pgf(1.0 - 2.0 * gamma)) - math.log(2.0) - ent


def F_of_alpha(dist: WeightDist, alpha: float):
    """sup over gamma in [0, 1/2] of F_gamma, with the smallest maximizer.

    Returns (value, gamma0, beta0) where beta0 = rho(1-2 g0)/(1 + rho(1-2 g0))
    is the null-vector row-usage fraction at the optimum.
    """
    f = lambda g: F_gamma(dist, alpha, g)
    grid = _GAMMA_GRID
    vals = [f(g) for g in grid]
    cands = [(vals[0], grid[0]), (vals[-1], grid[-1])]
    for i in range(1, len(grid) - 1):
        if vals[i] >= vals[i - 1] and vals[i] >= vals[i + 1]:
            g0, v0 = _golden_min(lambda g: -f(g), grid[i - 1], grid[i + 1], GAMMA_TOL)
            cands.append((-v0, g0))
    best = max(v for v, _ in cands)
    gamma0 = min(g for v, g in cands if v >= best - 1e-14)
    r = dist.pgf(1.0 - 2.0 * gamma0)
    return best, gamma0, r / (1.0 + r)


def alpha_star(dist: WeightDist, cross_check: bool = True) -> float:
    """inf{alpha >= 0 : F(alpha) > 0} by bisection against F > TOL_F.

    For a fixed weight r >= 3 the result is cross-checked against two
    independent routes (the stationary-point equation in gamma, and the
    hyperbolic-substitution system); disagreement beyond ROUTE_TOL raises
    Inconsistent.
    """
    if F_of_alpha(dist, 0.0)[0] > TOL_F:
        return 0.0
    lo, hi = 0.0, 1.0
    if F_of_alpha(dist, hi)[0] <= TOL_F:  # alpha_star <= 1 always; guard anyway
        hi = 2.0
    while hi - lo > ALPHA_TOL:
        mid = 0.5 * (lo + hi)
        if F_of_alpha(dist, mid)[0] > TOL_F:
            hi = mid
        else:
            lo = mid
    a_sup = 0.5 * (lo + hi)
    if cross_check and len(dist.atoms) == 1 and dist.min_weight >= 3:
        r = dist.min_weight
        a_stat = _alpha_star_stationary(r)
        a_lam = float(_alpha_star_lambda_system(r))
        if abs(a_sup - a_stat) > ROUTE_TOL or abs(a_sup - a_lam) > ROUTE_TOL:
            raise Inconsistent(
                f"alpha_star routes disagree at r={r}: sup={a_sup!r}, "
                f"stationary={a_stat!r}, lambda-system={a_lam!r}")
        return a_lam  # best-conditioned route once agreement is established
    return min(a_sup, 1.0)  # alpha_star <= 1 always; the bisection can overshoot by ~1e-12


def _alpha_star_stationary(r: int) -> float:
    # Solve alpha_r(gamma) = phi_r(gamma); the difference is decreasing on
    # (0, 1/2).  The root sits near e^-r, so the bisection runs on log(gamma).
    def a_r(u):
        g = math.exp(u)
        t = 1.0 - 2.0 * g
        return (1.0 + t**r) / (2.0 * r * t ** (r - 1)) * (math.log1p(-g) - u)

    def phi_r(u):
        g = math.exp(u)
        t = 1.0 - 2.0 * g
        # log(2 g^g (1-g)^(1-g)) evaluated stably for tiny g
        return (math.log(2.0) + g * u + (1.0 - g) * math.log1p(-g)) / math.log1p(t**r)

    lo, hi = math.log(1e-300), math.log(0.45)
    while hi - lo > 1e-11:
        mid = 0.5 * (lo + hi)
        if a_r(mid) - phi_r(mid) > 0.0:
            lo = mid
        else:
            hi = mid
    return a_r(0.5 * (lo + hi))


def _alpha_star_lambda_system(r: int, precision: int = 0):
    # Two-equation system in (alpha, lambda) with t = tanh(lambda):
    #   (1 + t^r)^alpha e^{-lambda t} cosh(lambda) = 1
    #   r alpha = (1 + t^-r) lambda t
    # Substituting the second into the first leaves one equation in lambda.
    ctx = mp if precision else math

    def a_of(lam):
        t = ctx.tanh(lam)
        return (1 + t**-r) * lam * t / r

    def f(lam):
        t = ctx.tanh(lam)
        return a_of(lam) * ctx.log1p(t**r) - lam * t + ctx.log(ctx.cosh(lam))

    def solve(lo, hi, tol):
        flo = f(lo)
        while hi - lo > tol:
            mid = (lo + hi) / 2
            if (f(mid) > 0) == (flo > 0):
                lo = mid
            else:
                hi = mid
        return a_of((lo + hi) / 2)

    if precision:
        with mp.workprec(precision):
            return solve(mp.mpf("0.05"), mp.mpf(80), mp.mpf(2) ** (20 - precision))
    return solve(0.05, 80.0, 1e-14)


def R_of_alpha(dist: WeightDist, alpha: float):
    """Decay rate of the all-columns-even probability:
    -log sup_gamma rho(1-2 gamma)^alpha / (2 gamma^gamma (1-gamma)^(1-gamma)).

    Returns (rate, gamma1) with gamma1 the maximizer.
    """
    if alpha <= 0:
        raise InvalidParam(f"alpha {alpha} <= 0")

    def f(g):
        if g >= 0.5:
            return -math.inf  # rho(0) = 0 for min_weight >= 1
        v = dist.pgf(1.0 - 2.0 * g)
        if v <= 0.0:  # double underflow for tiny arguments with heavy weights
            return -math.inf
        ent = _xlogx(g) + _xlogx(1.0 - g)
        return alpha * math.log(v) - math.log(2.0) - ent

    grid = _GAMMA_GRID[:-1]
    vals = [f(g) for g in grid]
    cands = [(vals[0], grid[0])]
    for i in range(1, len(grid) - 1):
        if vals[i] >= vals[i - 1] and vals[i] >= vals[i + 1]:
            g0, v0 = _golden_min(lambda g: -f(g), grid[i - 1], grid[i + 1], GAMMA_TOL)
            cands.append((-v0, g0))
    best, g1 = max(cands)
    return -best, g1


# --- the 2-core functions h, psi, g_star ----------------------------------

def h_psi(dist: WeightDist, x: float):
    """(h, psi, h', psi') at x in (0, 1).

    h' shares its zero set with psi' (psi' = -rho * h'), which causes the
    mirrored geometry of the two curves and makes local minima of h the only
    possible jump targets of g_star.
    """
    if not 0.0 < x < 1.0:
        raise InvalidParam(f"x {x} outside (0, 1)")
    x = min(x, X_HI)
    r0 = dist.pgf(x)
    r1 = dist.pgf(x, 1)
    lg = math.log1p(-x)
    if r1 <= 0.0:  # double underflow at tiny x for heavy minimum weights
        psi = x + (1.0 + x / dist.min_weight - x) * lg
        return math.inf, psi, -math.inf, 0.0
    r2 = dist.pgf(x, 2)
    h = -lg / r1
    psi = x + (1.0 + r0 / r1 - x) * lg
    hp = (1.0 / r1) * (1.0 / (1.0 - x) + (r2 / r1) * lg)
    psip = -r0 * hp
    return h, psi, hp, psip


def _h(dist: WeightDist, x: float) -> float:
    x = min(x, X_HI)
    r1 = dist.pgf(x, 1)
    if r1 <= 0.0:
        return math.inf
    return -math.log1p(-x) / r1


def _psi(dist: WeightDist, x: float) -> float:
    if x <= 0.0:
        return 0.0  # continuous extension psi(0) = 0
    x = min(x, X_HI)
    r1 = dist.pgf(x, 1)
    ratio = dist.pgf(x) / r1 if r1 > 0.0 else x / dist.min_weight
    return x + (1.0 + ratio - x) * math.log1p(-x)


def _h_local_minima(dist: WeightDist) -> list:
    """Interior local minima of h, golden-refined, sorted by location."""
    h = lambda x: _h(dist, x)
    grid = _X_GRID
    vals = [h(x) for x in grid]
    mins = []
    for i in range(1, len(grid) - 1):
        if vals[i] < vals[i - 1] and vals[i] <= vals[i + 1]:
            x, v = _golden_min(h, grid[i - 1], grid[i + 1], X_TOL)
            if not mins or x - mins[-1][0] > 1e-9:
                mins.append((x, v))
    return mins


def alpha_sharp(dist: WeightDist):
    """(inf of h over (0,1), list of interior local minima of h).

    The infimum accounts for the boundary behaviour as x -> 0 (finite for
    min_weight <= 2, diverging for min_weight >= 3).
    """
    mins = _h_local_minima(dist)
    inf_h = min((v for _, v in mins), default=math.inf)
    inf_h = min(inf_h, _h(dist, 1e-13))
    return inf_h, mins


def _h_of_u(dist: WeightDist, u: float) -> float:
    # h on the scale u = -log(1 - x), where it is nearly linear: u / rho'(x).
    r1 = dist.pgf(-math.expm1(-u), 1)
    if r1 <= 0.0:
        return math.inf
    return u / r1


def _psi_of_u(dist: WeightDist, u: float) -> float:
    # psi(1 - e^-u) without forming 1 - x, which keeps full precision even
    # when the root sits within e^-30 of 1 (heavy fixed weights).
    x = -math.expm1(-u)
    if x <= 0.0:
        return 0.0
    r1 = dist.pgf(x, 1)
    ratio = dist.pgf(x) / r1 if r1 > 0.0 else x / dist.min_weight
    return x - u * (math.exp(-u) + ratio)


_U_HI = 700.0  # e^-u stays a normal double; x = 1 - e^-u rounds to 1.0 past u ~ 37
_U_TOL = 1e-14


def _g_star_u(dist: WeightDist, alpha: float, minima: list) -> float | None:
    """u-coordinate of g_star(alpha); None when the level set is empty."""
    lo_x = 0.0
    for x, v in minima:
        if v <= alpha:
            lo_x = max(lo_x, x)
    if lo_x == 0.0:
        if _h(dist, 1e-13) > alpha:
            return None
        lo_x = 1e-13
    # exactly one crossing of h = alpha to the right of lo_x: any dip below
    # alpha out there would be a local minimum <= alpha right of lo_x
    lo, hi = -math.log1p(-lo_x), _U_HI
    if _h_of_u(dist, hi) <= alpha:
        return hi
    while hi - lo > _U_TOL:
        mid = 0.5 * (lo + hi)
        if _h_of_u(dist, mid) <= alpha:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def g_star(dist: WeightDist, alpha: float, _minima: list | None = None) -> float:
    """sup{x in (0,1) : h(x) <= alpha}, with sup of the empty set = 0.

    Right-continuous in alpha; jumps exactly at the levels of the local
    minima of h that are visible from the right.
    """
    if alpha < 0:
        raise InvalidParam(f"alpha {alpha} < 0")
    mins = _h_local_minima(dist) if _minima is None else _minima
    u = _g_star_u(dist, alpha, mins)
    return 0.0 if u is None else -math.expm1(-u)


def discontinuities(dist: WeightDist, prominence: float = PROMINENCE) -> list:
    """Jump set of g_star as (alpha, g_left, g_right) triples, alpha ascending.

    A local minimum of h at x with value v produces a jump at alpha = v
    exactly when h stays strictly above v everywhere to the right of x (the
    minimum is "visible from the right"); the jump lands on x.  The first
    entry is always at alpha_sharp.
    """
    mins = _h_local_minima(dist)
    kept = []
    best_right = math.inf
    for x, v in reversed(mins):
        if v < best_right - prominence:
            kept.append((x, v))
            best_right = v
    kept.reverse()

    grid = _X_GRID
    vals = [_h(dist, x) for x in grid]
    out = []
    for j, (x, v) in enumerate(kept):
        if j == 0:
            g_left = 0.0
            if _h(dist, 1e-13) <= v:  # min_weight <= 2: level set reaches 0
                g_left = _rightmost_crossing_below(dist, v, grid, vals, x)
        else:
            g_left = _rightmost_crossing_below(dist, v, grid, vals, x)
        out.append((v, g_left, x))
    return out


def _rightmost_crossing_below(dist, level, grid, vals, x_min):
    # rightmost solution of h = level strictly left of the basin of x_min
    i = 0
    for idx in range(len(grid)):
        if grid[idx] >= x_min:
            break
        i = idx
    while i > 0 and vals[i] > level:
        i -= 1
    lo, hi = grid[i], grid[i + 1]
    while hi - lo > GSTAR_TOL:
        mid = 0.5 * (lo + hi)
        if _h(dist, mid) <= level:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def alpha_bar(dist: WeightDist, step: float = ALPHA_BAR_STEP, alpha_max: float = 1.05) -> float:
    """inf{alpha > alpha_sharp : psi(g_star(alpha)) < 0}.

    Scans alpha at the given step for the first sign change of psi o g_star,
    then bisects to ALPHA_BAR_TOL.  If the change happens across a jump of
    g_star, the jump point itself is returned.  The default step resolves
    sign windows a few 1e-4 wide; lower it for even closer-spaced features.
    """
    if dist.min_weight < 3:
        raise InvalidParam("alpha_bar requires min_weight >= 3")
    a_sharp, mins = alpha_sharp(dist)

    def psg(a):
        u = _g_star_u(dist, a, mins)
        return 0.0 if u is None else _psi_of_u(dist, u)

    prev = a_sharp
    a = a_sharp + step
    hit = None
    while a <= alpha_max + step:
        if psg(a) < 0.0:
            hit = (prev, a)
            break
        prev = a
        a += step
    if hit is None:
        raise NoConvergence(
            f"psi(g_star(alpha)) never negative on ({a_sharp}, {alpha_max}]")
    lo, hi = hit
    while hi - lo > ALPHA_BAR_TOL:
        mid = 0.5 * (lo + hi)
        if psg(mid) < 0.0:
            hi = mid
        else:
            lo = mid
    a_bar = 0.5 * (lo + hi)
    for alpha_d, _, _ in discontinuities(dist):
        if abs(a_bar - alpha_d) <= 10.0 * ALPHA_BAR_TOL:
            return alpha_d
    return a_bar


def psi_roots(dist: WeightDist) -> list:
    """All roots of psi in (0, 1), by grid sign changes plus bisection."""
    grid = _X_GRID
    vals = [_psi(dist, x) for x in grid]
    roots = []
    for i in range(1, len(grid)):
        if vals[i] == 0.0:
            roots.append(grid[i])
        elif (vals[i] > 0.0) != (vals[i - 1] > 0.0):
            lo, hi = grid[i - 1], grid[i]
            ref = vals[i - 1] > 0.0
            while hi - lo > X_TOL:
                mid = 0.5 * (lo + hi)
                if (_psi(dist, mid) > 0.0) == ref:
                    lo = mid
                else:
                    hi = mid
            roots.append(0.5 * (lo + hi))
    return [r for i, r in enumerate(roots) if i == 0 or r - roots[i - 1] > 1e-9]


def psi_gstar_sign_pattern(dist: WeightDist, step: float = 2e-5,
                           alpha_max: float = 1.02) -> str:
    """Condensed sign sequence of psi(g_star(alpha)) for alpha past alpha_sharp,
    e.g. "+-" for a single transition or "+-+-" for the re-entrant mixtures."""
    a_sharp, mins = alpha_sharp(dist)
    pattern = []
    a = a_sharp + step
    while a <= alpha_max:
        u = _g_star_u(dist, a, mins)
        v = 0.0 if u is None else _psi_of_u(dist, u)
        s = "+" if v > 0 else ("-" if v < 0 else "0")
        if s != "0" and (not pattern or pattern[-1] != s):
            pattern.append(s)
        a += step
    return "".join(pattern)


# --- fixed-weight root x*_r by sandwich iteration ---------------------------

def x_star_iteration(r: int, steps: int = 5000):
    """The unique root of psi in (0,1) for the fixed weight r >= 3, bracketed
    by the monotone iteration of i(x) = 1 - exp(-x / (1 - x (r-1)/r)).

    Starting from a_0 = (r-2)/(r-1) and b_0 = 1 the lower sequence increases
    and the upper decreases toward the root; iteration stops once they agree
    to 1e-14.  Returns (x_star, lower_seq, upper_seq).
    """
    if r < 3:
        raise InvalidParam(f"r {r} < 3")
    theta = (r - 1.0) / r

    def step_fn(x):
        return 1.0 - math.exp(-x / (1.0 - theta * x))

    a = (r - 2.0) / (r - 1.0)
    b = 1.0
    lower, upper = [a], [b]
    for _ in range(steps):
        if b - a < 1e-14:
            return 0.5 * (a + b), lower, upper
        a2, b2 = step_fn(a), step_fn(b)
        if a2 <= a and b2 >= b:
            break  # float fixpoint reached on both sides
        if a2 > a:
            a = a2
            lower.append(a)
        if b2 < b:
            b = b2
            upper.append(b)
    if b - a < 1e-14:
        return 0.5 * (a + b), lower, upper
    raise NoConvergence(f"sandwich stalled at width {b - a:.3e} after {steps} steps")


# --- 2-core limit quantities ------------------------------------------------

@dataclass(frozen=True)
class CoreTheory:
    """Almost-sure limits for the 2-core of M(n, alpha n)."""

    alpha: float
    g_star: float
    mu: float               # alpha rho'(1): mean column degree
    nu: float               # alpha rho'(g*): core column-degree parameter
    core_row_frac: float    # alpha rho(g*)
    occupied_col_frac: float  # 1 - e^-nu (1 + nu)
    incidence_frac: float   # -g* log(1 - g*) = alpha g* rho'(g*)
    aspect_sign: int        # sign of psi(g*(alpha))

    def col_degree_pmf(self, d_max: int = 20) -> dict:
        """Limiting core column-degree law: Poisson(nu) off {0, 1}, with the
        removed mass sitting at degree 0 (columns are never deleted)."""
        nu = self.nu
        pmf = {0: math.exp(-nu) * (1.0 + nu), 1: 0.0}
        for d in range(2, d_max + 1):
            pmf[d] = math.exp(-nu) * nu**d / math.factorial(d)
        return pmf


def core_theory(dist: WeightDist, alpha: float) -> CoreTheory:
    """Evaluate the 2-core limit fractions at the given aspect ratio alpha."""
    if dist.min_weight < 3:
        raise InvalidParam("core limit theory requires min_weight >= 3")
    for alpha_d, _, _ in discontinuities(dist):
        if abs(alpha - alpha_d) < 1e-9:
            warnings.warn(
                f"alpha={alpha} sits on a discontinuity of g_star; "
                "the core limits are not continuous here", stacklevel=2)
    mins = _h_local_minima(dist)
    u = _g_star_u(dist, alpha, mins)
    mu = alpha * dist.pgf(1.0, 1)
    if u is None:
        return CoreTheory(alpha, 0.0, mu, 0.0, 0.0, 0.0, 0.0, 0)
    g = -math.expm1(-u)
    nu = alpha * dist.pgf(g, 1)
    rows = alpha * dist.pgf(g)
    cols = 1.0 - math.exp(-nu) * (1.0 + nu)
    inc = g * u  # -g log(1 - g), with u carrying the full precision of log(1-g)
    if abs(inc - alpha * g * dist.pgf(g, 1)) > 1e-10:
        raise Inconsistent(
            f"incidence identity violated at alpha={alpha}: "
            f"{inc} vs {alpha * g * dist.pgf(g, 1)}")
    p = _psi_of_u(dist, u)
    sign = (p > 0) - (p < 0)
    return CoreTheory(alpha, g, mu, nu, rows, cols, inc, sign)


# --- large-r asymptotics (arbitrary precision) ------------------------------

def _x_star_mp(r: int):
    theta = mp.mpf(r - 1) / r
    step_fn = lambda x: 1 - mp.exp(-x / (1 - theta * x))
    a, b = mp.mpf(r - 2) / (r - 1), mp.mpf(1)
    for _ in range(20000):
        a, b = step_fn(a), step_fn(b)
        if b - a < mp.mpf(2) ** (10 - mp.mp.prec):
            break
    return (a + b) / 2


def threshold_asymptotics(r_max: int = 12, precision: int = 256) -> list:
    """Scaled threshold gaps for r = 3..r_max, computed in arbitrary precision:
    (1 - alpha_star_r) e^r log 2 and (1 - alpha_bar_r) e^r, both -> 1."""
    if r_max > 16:
        raise InvalidParam("r_max > 16 serves no purpose; the gaps are < 1e-7 there")
    rows = []
    with mp.workprec(precision):
        for r in range(3, r_max + 1):
            a_star = _alpha_star_lambda_system(r, precision=precision)
            xs = _x_star_mp(r)
            a_bar = -mp.log(1 - xs) / (r * xs ** (r - 1))
            rows.append({
                "r": r,
                "alpha_star": float(a_star),
                "alpha_bar": float(a_bar),
                "alpha_star_str": mp.nstr(a_star, 30),
                "alpha_bar_str": mp.nstr(a_bar, 30),
                "star_scaled": float((1 - a_star) * mp.e**r * mp.log(2)),
                "bar_scaled": float((1 - a_bar) * mp.e**r),
            })
    return rows


# --- assembled report --------------------------------------------------------

@dataclass(frozen=True)
class ThresholdReport:
    alpha_sharp: float
    alpha_star: float
    alpha_bar: float | None
    x_star: float | None
    x_star_is_psi_root: bool
    bar_crossing_transversal: bool | None
    discontinuities: tuple
    gamma0: float | None
    beta0: float | None
    witness_alpha: float | None
    tolerances: dict = field(default_factory=dict)


def threshold_report(dist: WeightDist, witness_alpha: float | None = None,
                     scan_step: float = ALPHA_BAR_STEP) -> ThresholdReport:
    """Compute every threshold for one weight distribution.

    alpha_bar and x_star require min_weight >= 3 and are None otherwise
    (the 2-core transition is not defined for weights 1 and 2).
    """
    a_sharp, mins = alpha_sharp(dist)
    a_star = alpha_star(dist)
    disc = tuple(discontinuities(dist))
    a_bar = x_st = transversal = None
    is_root = False
    if dist.min_weight >= 3:
        a_bar = alpha_bar(dist, step=scan_step)

        def psg(a):
            u = _g_star_u(dist, a, mins)
            return 0.0 if u is None else _psi_of_u(dist, u)

        x_st = g_star(dist, a_bar, mins)
        is_root = abs(psg(a_bar)) <= 1e-6
        d = 10.0 * ALPHA_BAR_TOL
        transversal = psg(a_bar - d) > 0.0 > psg(a_bar + d)
        # the ordering can only be certified to the alpha_bar bisection
        # resolution; the true gap drops below it around fixed weight 22
        if not (a_star <= a_bar + 10 * ALPHA_BAR_TOL and a_bar <= 1.0 + 1e-9):
            raise Inconsistent(
                f"threshold ordering violated: alpha_star={a_star}, alpha_bar={a_bar}")
    if dist.min_weight >= 2:
        if not (0.5 - 1e-9 <= a_star <= 1.0):
            raise Inconsistent(f"alpha_star={a_star} outside [1/2, 1] for min_weight >= 2")
    gamma0 = beta0 = None
    if witness_alpha is not None:
        _, gamma0, beta0 = F_of_alpha(dist, witness_alpha)
    return ThresholdReport(
        alpha_sharp=a_sharp,
        alpha_star=a_star,
        alpha_bar=a_bar,
        x_star=x_st,
        x_star_is_psi_root=is_root,
        bar_crossing_transversal=transversal,
        discontinuities=disc,
        gamma0=gamma0,
        beta0=beta0,
        witness_alpha=witness_alpha,
        tolerances={
            "tol_F": TOL_F,
            "alpha_bisect": ALPHA_TOL,
            "gamma_refine": GAMMA_TOL,
            "g_star_bisect": GSTAR_TOL,
            "alpha_bar_bisect": ALPHA_BAR_TOL,
            "alpha_bar_scan_step": scan_step,
            "jump_prominence": PROMINENCE,
        },
    )
