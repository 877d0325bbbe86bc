"""Exponent bookkeeping for the weighted bounds: the Sobolev-type target
exponent, the two derived auxiliary exponents, and the admissible windows for
radial weight growth rates.
"""

from dataclasses import dataclass, field

from .errors import ConfigError, DomainError

EXPONENT_TOL = 1e-9


@dataclass(frozen=True)
class ExponentConfig:
    """Frozen bundle of branching number, integrability exponents, and the
    derived quantities every bound is phrased in.

    mode "sobolev": q = p / (1 - alpha p), the largest admissible target.
    mode "free": any target q with p <= q < p / (1 - alpha p) is allowed and
    is supplied by the caller.
    """

    k: int
    p: float
    alpha: float
    mode: str = "sobolev"
    q: float = field(default=None)
    delta: float = field(default=None)
    epsilon: float = field(default=None)
    exhaustive_guard: int = 12
    heuristic_starts: int = 8
    anneal_steps: int = 200

    def __post_init__(self):
        if self.k < 2:
            raise DomainError(f"branching number must be >= 2, got {self.k}")
        if not 0 < self.alpha < 1:
            raise DomainError(f"alpha must lie in (0, 1), got {self.alpha}")
        if not 1 < self.p < 1.0 / self.alpha:
            raise DomainError(
                f"p must lie in (1, 1/alpha) = (1, {1.0 / self.alpha:.6g}), got {self.p}"
            )
        sob_q = self.p / (1.0 - self.alpha * self.p)
        if self.mode == "sobolev":
            if self.q is not None and abs(self.q - sob_q) > EXPONENT_TOL:
                raise ConfigError(
                    f"sobolev mode fixes q = {sob_q:.12g}; drop q or pass that value"
                )
            object.__setattr__(self, "q", sob_q)
        elif self.mode == "free":
            if self.q is None:
                raise ConfigError("free mode requires an explicit target exponent q")
            if not self.p <= self.q < sob_q + EXPONENT_TOL:
                raise ConfigError(
                    f"free mode needs p <= q <= {sob_q:.12g}, got q = {self.q}"
                )
        else:
            raise ConfigError(f"mode must be 'sobolev' or 'free', got {self.mode!r}")
        # delta solves (p - delta) / (p + 1 - delta) = 1 - 1/q, i.e. q = p + 1 - delta
        object.__setattr__(self, "delta", self.p + 1.0 - self.q)
        object.__setattr__(
            self, "epsilon", (1.0 - self.p * self.alpha) / (1.0 - self.alpha)
        )

    @property
    def is_sobolev(self):
        return self.mode == "sobolev"

    def identities(self):
        """The closed-form identities tying q, delta, epsilon together.
        Each entry is (name, lhs, rhs); all residuals should vanish."""
        p, q, d, e, a = self.p, self.q, self.delta, self.epsilon, self.alpha
        out = [
            ("split_exponent", (p - d) / (p + 1.0 - d), 1.0 - 1.0 / q),
            ("target_reciprocal", 1.0 / (p + 1.0 - d), 1.0 / q),
        ]
        if self.is_sobolev:
            out.append(("sobolev_scale", p / q, 1.0 - a * p))
            out.append(("sobolev_delta", d, (1.0 - a * p - a * p * p) / (1.0 - a * p)))
            out.append(("scale_fraction", p / (p - d + 1.0), e * (1.0 - a)))
        return out


def derived_exponents(k, p, alpha, mode="sobolev", q=None):
    return ExponentConfig(k=k, p=p, alpha=alpha, mode=mode, q=q)


def radial_window(cfg):
    """Closed interval of radial growth rates the scalar exponent condition is
    documented to certify: [0, p (p - 1) / q]."""
    return (0.0, cfg.p * (cfg.p - 1.0) / cfg.q)


def per_level_window(cfg):
    """Closed interval of radial growth rates where the per-level counting
    inequality actually holds with constant 1: [max(0, -delta p / q), p - 1].

    The left edge comes from the deepest corner (m = r, i = 0, j = r); the
    right edge from the shallow corner (m = 0, j = 0, i = r).
    """
    return (max(0.0, -cfg.delta * cfg.p / cfg.q), cfg.p - 1.0)


def series_exponent(cfg, dyadic_beta):
    """Base-k exponent governing the radius series: the series over r of
    k^(-r * series_exponent) converges iff this is > 0."""
    if not 0 < dyadic_beta < 1:
        raise DomainError(f"dyadic_beta must lie in (0, 1), got {dyadic_beta}")
    a, e = cfg.alpha, cfg.epsilon
    return 1.0 - dyadic_beta - e * (1.0 - a) - a


def series_boundary(cfg):
    """dyadic_beta value at which the radius series switches between
    convergent and divergent: (1 - epsilon) * (1 - alpha)."""
    return (1.0 - cfg.epsilon) * (1.0 - cfg.alpha)
