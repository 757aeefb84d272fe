"""Modulus calculus: convexity/smoothness/continuity moduli and derived forms.

A modulus is a positive-rational-valued function on positive rationals.  User
moduli whose closed forms involve square roots (the Hilbert convexity modulus)
are evaluated as *rational lower bounds* via directed interval arithmetic:
under-reporting a convexity or smoothness modulus keeps every derived quantity
sound, since a smaller modulus is still a modulus.
"""

from __future__ import annotations

import csv
import random
from dataclasses import dataclass, field
from fractions import Fraction

from .rationals import ceil_q, sqrt_bounds, sqrt_lb, sqrt_ub

DOMAIN_CONVEXITY = "convexity"  # (0, 2]
DOMAIN_POSITIVE = "positive"  # (0, oo)


class DomainError(ValueError):
    pass


@dataclass(frozen=True)
class Modulus:
    """A named positive function on positive rationals.

    ``nondecreasing`` declares monotonicity; it is relied upon by the bound
    cascade to collapse minima over astronomically long index ranges, and is
    spot-checked by the validation operations rather than trusted blindly.
    """

    name: str
    fn: object
    domain: str = DOMAIN_POSITIVE
    nondecreasing: bool = True

    def __call__(self, eps):
        eps = Fraction(eps)
        if eps <= 0:
            raise DomainError(f"modulus {self.name} evaluated at {eps} <= 0")
        if self.domain == DOMAIN_CONVEXITY and eps > 2:
            raise DomainError(f"modulus {self.name} evaluated at {eps} > 2")
        value = Fraction(self.fn(eps))
        if value <= 0:
            raise DomainError(f"modulus {self.name} returned {value} <= 0 at {eps}")
        return value


def identity_modulus(name="identity"):
    return Modulus(name=name, fn=lambda e: e)


def scaled_modulus(c, name=None):
    c = Fraction(c)
    if c <= 0:
        raise DomainError("scale must be positive")
    return Modulus(name=name or f"linear:{c}", fn=lambda e: c * e)


def constant_modulus(c, name=None):
    c = Fraction(c)
    if c <= 0:
        raise DomainError("constant must be positive")
    return Modulus(name=name or f"const:{c}", fn=lambda e: c)


def hilbert_eta(initial_prec_bits=128):
    """Convexity modulus of a Hilbert space, 1 - sqrt(1 - eps^2/4).

    Evaluated as a rational lower bound; the precision is raised adaptively
    until the bound is strictly positive (it always is for eps in (0,2]).
    Exact whenever the radicand is a perfect rational square (e.g. eps = 2).
    """

    def fn(eps):
        radicand = 1 - eps * eps / 4
        if radicand < 0:
            raise DomainError(f"hilbert eta at {eps} > 2")
        prec = initial_prec_bits
        while True:
            ub = sqrt_ub(radicand, prec)
            value = 1 - ub
            if value > 0:
                return value
            prec *= 2

    return Modulus(name="hilbert-eta", fn=fn, domain=DOMAIN_CONVEXITY)


def table_modulus(path, name=None):
    """Step-function modulus from a two-column CSV (epsilon, value).

    The value at eps is the table value at the largest tabulated point <= eps.
    """
    rows = []
    with open(path, newline="") as handle:
        for row in csv.reader(handle):
            if not row or row[0].lstrip().startswith("#"):
                continue
            rows.append((Fraction(row[0]), Fraction(row[1])))
    if not rows:
        raise DomainError(f"empty modulus table {path}")
    rows.sort()
    monotone = all(rows[i][1] <= rows[i + 1][1] for i in range(len(rows) - 1))

    def fn(eps):
        best = None
        for point, value in rows:
            if point <= eps:
                best = value
            else:
                break
        if best is None:
            raise DomainError(f"{eps} below smallest tabulated point {rows[0][0]}")
        return best

    return Modulus(
        name=name or f"table:{path}", fn=fn, nondecreasing=monotone
    )


def resolve_modulus(spec):
    """Resolve a string key ('hilbert-eta', 'identity-tau', 'identity-theta',
    'linear:<c>', 'const:<c>', 'table:<path>') to a Modulus."""
    if isinstance(spec, Modulus):
        return spec
    key = str(spec)
    if key == "hilbert-eta":
        return hilbert_eta()
    if key in ("identity-tau", "identity-theta", "identity"):
        return identity_modulus(key)
    if key.startswith("linear:"):
        return scaled_modulus(Fraction(key.split(":", 1)[1]))
    if key.startswith("const:"):
        return constant_modulus(Fraction(key.split(":", 1)[1]))
    if key.startswith("table:"):
        return table_modulus(key.split(":", 1)[1])
    raise DomainError(f"unknown modulus preset {key!r}")


# ---------------------------------------------------------------------------
# Derived moduli
# ---------------------------------------------------------------------------


def psi(b, eta, eps):
    """Convexity modulus for the squared norm on a ball of radius b.

    psi_{b,eta}(e) = min( (min(e/2, (e^2/72b) * eta(e/2b)^2))^2 / 4,
                          (e^2/48) * eta(e/2b)^2 ).
    """
    eps = Fraction(eps)
    if not (0 < eps <= 2):
        raise DomainError(f"psi needs eps in (0,2], got {eps}")
    if b < 1:
        raise DomainError("psi needs integer b >= 1")
    e2 = eps * eps
    eta_val = eta(eps / (2 * b))
    eta_sq = eta_val * eta_val
    inner = min(eps / 2, e2 / (72 * b) * eta_sq)
    return min(inner * inner / 4, e2 / 48 * eta_sq)


def psi_modulus(b, eta):
    return Modulus(
        name=f"psi[{b},{eta.name}]",
        fn=lambda e: psi(b, eta, e),
        domain=DOMAIN_CONVEXITY,
        nondecreasing=eta.nondecreasing,
    )


def omega(b, tau, eps):
    """Norm-to-norm continuity modulus of the duality map on a b-ball.

    omega_tau(b, e) = (r1^2 / 12 r2) * tau(r1 / 2 r2) with r1 = min(e, 2),
    r2 = max(b, 1).
    """
    eps = Fraction(eps)
    if eps <= 0:
        raise DomainError(f"omega needs eps > 0, got {eps}")
    r1 = min(eps, Fraction(2))
    r2 = max(Fraction(b), Fraction(1))
    return r1 * r1 / (12 * r2) * tau(r1 / (2 * r2))


def omega_modulus(b, tau):
    return Modulus(
        name=f"omega[{b},{tau.name}]",
        fn=lambda e: omega(b, tau, e),
        nondecreasing=tau.nondecreasing,
    )


def theta_tilde(theta, eps):
    """min(eps/4, theta(eps/2)); feeds every fixed-point displacement bound."""
    eps = Fraction(eps)
    if eps <= 0:
        raise DomainError(f"theta_tilde needs eps > 0, got {eps}")
    return min(eps / 4, theta(eps / 2))


def theta_tilde_modulus(theta):
    return Modulus(
        name=f"theta_tilde[{theta.name}]",
        fn=lambda e: theta_tilde(theta, e),
        nondecreasing=theta.nondecreasing,
    )


# ---------------------------------------------------------------------------
# Empirical validation of user-supplied moduli
# ---------------------------------------------------------------------------


@dataclass
class ValidationReport:
    modulus: str
    kind: str
    checked: int = 0
    violations: list = field(default_factory=list)
    indeterminate: int = 0

    @property
    def ok(self):
        return not self.violations

    def record(self, **payload):
        self.violations.append(payload)

    def as_dict(self):
        return {
            "modulus": self.modulus,
            "kind": self.kind,
            "checked": self.checked,
            "violations": self.violations,
            "indeterminate": self.indeterminate,
            "ok": self.ok,
        }


def _random_fraction(rng, denom=64):
    return Fraction(rng.randint(-denom, denom), denom)


def _random_vector_in_unit_ball(space, rng):
    # uniform on the rational cube, rejected into the ball
    for _ in range(1000):
        coords = tuple(_random_fraction(rng) for _ in range(space.dim))
        v = space.point(coords)
        if space.norm_ub(v) <= 1:
            return v
    return space.point((Fraction(0),) * space.dim)


def _random_unit_vector(space, rng):
    """Exact-norm-one rational vector (p = 2 via Pythagorean rotations)."""
    coords = [Fraction(0)] * space.dim
    coords[0] = Fraction(1)
    v = space.point(tuple(coords))
    if space.dim == 1:
        return v if rng.random() < 0.5 else space.scale(-1, v)
    for _ in range(2 * space.dim):
        i, j = rng.sample(range(space.dim), 2)
        t = Fraction(rng.randint(-8, 8), 8)
        den = 1 + t * t
        c, s = (1 - t * t) / den, 2 * t / den  # rational point on the circle
        coords = list(v.coords)
        coords[i], coords[j] = c * coords[i] - s * coords[j], s * coords[i] + c * coords[j]
        v = space.point(tuple(coords))
    return v


def validate_convexity_modulus(space, eta, samples, seed=0):
    """Check the two-point midpoint contraction on sampled unit-ball pairs.

    For pairs with |x|,|y| <= 1 and |x - y| >= e the defining inequality
    |(x+y)/2| <= 1 - eta(e) must hold; violations are report content.
    """
    rng = random.Random(seed)
    report = ValidationReport(modulus=eta.name, kind="convexity")
    while report.checked < samples:
        x = _random_vector_in_unit_ball(space, rng)
        y = _random_vector_in_unit_ball(space, rng)
        diff_sq = space.norm_sq(space.sub(x, y))
        if diff_sq == 0:
            continue
        eps = min(sqrt_lb(diff_sq), Fraction(2))
        if eps <= 0:
            continue
        report.checked += 1
        try:
            bound = 1 - eta(eps)
        except DomainError:
            report.record(x=x.coords, y=y.coords, eps=eps, reason="domain")
            continue
        mid_sq = space.norm_sq(space.scale(Fraction(1, 2), space.add(x, y)))
        if bound < 0 or mid_sq > bound * bound:
            report.record(x=x.coords, y=y.coords, eps=eps, midpoint_sq=mid_sq, bound=bound)
    return report


def validate_smoothness_modulus(space, tau, samples, seed=0, eps_grid=None):
    """Check |x+y| + |x-y| <= 2 + e|y| on samples with |x| = 1, |y| <= tau(e)."""
    rng = random.Random(seed)
    report = ValidationReport(modulus=tau.name, kind="smoothness")
    grid = eps_grid or [Fraction(1, 8), Fraction(1, 2), Fraction(1), Fraction(2)]
    while report.checked < samples:
        eps = grid[report.checked % len(grid)]
        x = _random_unit_vector(space, rng)
        raw = _random_vector_in_unit_ball(space, rng)
        cap = tau(eps)
        # scale raw into the tau(eps)-ball, keeping coordinates rational
        norm_hi = space.norm_ub(raw)
        if norm_hi == 0:
            continue
        y = space.scale(cap / (2 * norm_hi), raw)
        report.checked += 1
        prec = 64
        while True:
            lhs_lo = space.norm_lb(space.add(x, y), prec) + space.norm_lb(space.sub(x, y), prec)
            lhs_hi = space.norm_ub(space.add(x, y), prec) + space.norm_ub(space.sub(x, y), prec)
            rhs_lo = 2 + eps * space.norm_lb(y, prec)
            rhs_hi = 2 + eps * space.norm_ub(y, prec)
            if lhs_hi <= rhs_lo:
                break  # certified pass
            if lhs_lo > rhs_hi:
                report.record(x=x.coords, y=y.coords, eps=eps)
                break
            if prec >= 4096:
                report.indeterminate += 1
                break
            prec *= 4
    return report
