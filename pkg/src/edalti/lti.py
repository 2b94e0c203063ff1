"""Discrete LTI machinery.

A model is the difference equation

    y(t) + a1*y(t-1) + ... + an*y(t-n) = b0*v(t) + ... + bn*v(t-n)

with the convention that prior outputs y(-1)..y(-n) form the initial state
and prior inputs are zero. The output then splits exactly into a free
response (initial state, zero input) plus a forced response (zero state,
actual input), which is the tonic/phasic reading of a skin-conductance
trace.

Partial fractions rewrite the transfer function B(z)/A(z) as a direct term
plus first-order subsystems gain/(z - pole); complex poles stay paired as
real second-order subsystems. Long-period complex pairs are noise-chasing
for a slow signal like skin conductance and can be pruned away.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import signal as _sig

from .errors import (
    DegenerateModelError,
    DegeneratePolesError,
    InvalidParameterError,
    NumericalError,
)
from .series import UniformSeries

__all__ = [
    "DiscreteTransferFunction",
    "InitialState",
    "FirstOrderSubsystem",
    "SubsystemSet",
    "simulate",
    "free_response",
    "forced_response",
    "impulse_response",
    "poles",
    "partial_fractions",
    "reconstruct",
    "prune",
    "time_constant",
]

_REAL_POLE_TOL = 1e-9


@dataclass(frozen=True)
class DiscreteTransferFunction:
    """Coefficients of the difference equation above.

    Attributes:
        a: denominator coefficients [a1..an]; the leading 1 is implicit.
        b: numerator coefficients [b0..bn], length order+1.
        sample_interval: seconds per sample.
    """

    a: np.ndarray
    b: np.ndarray
    sample_interval: float

    def __post_init__(self):
        a = np.array(self.a, dtype=float)
        b = np.array(self.b, dtype=float)
        if a.ndim != 1 or a.size < 1:
            raise InvalidParameterError("a must be [a1..an] with n >= 1")
        if b.shape != (a.size + 1,):
            raise InvalidParameterError(
                f"b must have length order+1 = {a.size + 1}, got {b.size}")
        if not (np.all(np.isfinite(a)) and np.all(np.isfinite(b))):
            raise InvalidParameterError("coefficients must be finite")
        if not (self.sample_interval > 0 and np.isfinite(self.sample_interval)):
            raise InvalidParameterError("sample_interval must be positive")
        a.setflags(write=False)
        b.setflags(write=False)
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "sample_interval", float(self.sample_interval))

    @property
    def order(self) -> int:
        return self.a.size

    def denominator(self) -> np.ndarray:
        """Full monic denominator polynomial [1, a1..an] in z."""
        return np.concatenate(([1.0], self.a))

    def is_stable(self, margin: float = 1.0) -> bool:
        return bool(np.max(np.abs(poles(self))) < margin)

    def dc_gain(self) -> float:
        """Steady-state gain B(1)/A(1)."""
        return float(np.sum(self.b) / np.sum(self.denominator()))


@dataclass(frozen=True)
class InitialState:
    """Prior outputs [y(-1), ..., y(-n)]; prior inputs are zero by convention."""

    prior_outputs: np.ndarray

    def __post_init__(self):
        arr = np.array(self.prior_outputs, dtype=float)
        if arr.ndim != 1 or arr.size < 1:
            raise InvalidParameterError("prior_outputs must be 1-D, length >= 1")
        if not np.all(np.isfinite(arr)):
            raise InvalidParameterError("prior_outputs must be finite")
        arr.setflags(write=False)
        object.__setattr__(self, "prior_outputs", arr)

    @property
    def order(self) -> int:
        return self.prior_outputs.size

    @classmethod
    def zero(cls, order: int) -> "InitialState":
        return cls(np.zeros(order))


@dataclass(frozen=True)
class FirstOrderSubsystem:
    """One partial-fraction term gain/(z - pole).

    A complex pole carries the residue for itself and its conjugate; the
    pair acts as a single real second-order subsystem.
    """

    gain: complex
    pole: complex
    sample_interval: float

    @property
    def is_complex_pair(self) -> bool:
        return abs(self.pole.imag) > _REAL_POLE_TOL * (1.0 + abs(self.pole))

    @property
    def is_stable(self) -> bool:
        return abs(self.pole) < 1.0

    @property
    def time_constant(self) -> float | None:
        """-Ts/ln(p) for a real pole in (0, 1); None otherwise."""
        if self.is_complex_pair:
            return None
        p = self.pole.real
        if not 0.0 < p < 1.0:
            return None
        return -self.sample_interval / np.log(p)

    @property
    def decay_time_constant(self) -> float | None:
        """Envelope e-folding time -Ts/ln|p|; None for |p| >= 1."""
        mag = abs(self.pole)
        if not 0.0 < mag < 1.0:
            return None
        return -self.sample_interval / np.log(mag)

    @property
    def oscillatory_period(self) -> float | None:
        """2*pi*Ts/|arg(p)| for complex pairs; None for real poles."""
        if not self.is_complex_pair:
            return None
        return 2.0 * np.pi * self.sample_interval / abs(np.angle(self.pole))

    def transfer_function(self) -> DiscreteTransferFunction:
        """Real first- or second-order transfer function for this term."""
        if not self.is_complex_pair:
            p, g = self.pole.real, self.gain.real
            return DiscreteTransferFunction([-p], [0.0, g], self.sample_interval)
        # g/(z-p) + conj(g)/(z-conj(p)) over a real quadratic
        p, g = self.pole, self.gain
        den = [-2.0 * p.real, abs(p) ** 2]
        num = [0.0, 2.0 * g.real, -2.0 * (g * np.conj(p)).real]
        return DiscreteTransferFunction(den, num, self.sample_interval)


@dataclass(frozen=True)
class SubsystemSet:
    """Partial-fraction decomposition: direct term plus subsystem list."""

    subsystems: tuple[FirstOrderSubsystem, ...]
    direct_term: float
    sample_interval: float


def _check_interval(tf: DiscreteTransferFunction, series: UniformSeries):
    if abs(series.sample_interval - tf.sample_interval) > 1e-12 * tf.sample_interval:
        raise InvalidParameterError(
            f"sample interval mismatch: model {tf.sample_interval} s, "
            f"input {series.sample_interval} s")


def _initial_filter_state(tf: DiscreteTransferFunction,
                          init: InitialState) -> np.ndarray:
    if init.order != tf.order:
        raise InvalidParameterError(
            f"initial state length {init.order} != model order {tf.order}")
    return _sig.lfiltic(tf.b, tf.denominator(), y=init.prior_outputs,
                        x=np.zeros(tf.order))


def simulate(tf: DiscreteTransferFunction, init: InitialState,
             input_series: UniformSeries) -> UniformSeries:
    """Run the difference equation over the input, seeded by the prior outputs."""
    _check_interval(tf, input_series)
    zi = _initial_filter_state(tf, init)
    y, _ = _sig.lfilter(tf.b, tf.denominator(), input_series.samples, zi=zi)
    return input_series.with_samples(y)


def free_response(tf: DiscreteTransferFunction, init: InitialState,
                  n_samples: int, start_time: float = 0.0) -> UniformSeries:
    """Output from the initial state alone (zero input)."""
    if n_samples < 1:
        raise InvalidParameterError("n_samples must be >= 1")
    zeros = UniformSeries(np.zeros(n_samples), tf.sample_interval, start_time)
    return simulate(tf, init, zeros)


def forced_response(tf: DiscreteTransferFunction,
                    input_series: UniformSeries) -> UniformSeries:
    """Output from the input alone (zero initial state)."""
    return simulate(tf, InitialState.zero(tf.order), input_series)


def impulse_response(tf: DiscreteTransferFunction, n_samples: int) -> np.ndarray:
    """Forced response to a unit impulse at t=0, as a plain array."""
    if n_samples < 1:
        raise InvalidParameterError("n_samples must be >= 1")
    v = np.zeros(n_samples)
    v[0] = 1.0
    return _sig.lfilter(tf.b, tf.denominator(), v)


def poles(tf: DiscreteTransferFunction) -> np.ndarray:
    """All order-n roots of the denominator (companion-matrix eigenvalues)."""
    den = tf.denominator()
    roots = np.roots(den)
    tol = 1e-8 * (1.0 + float(np.max(np.abs(tf.a))))
    residuals = np.abs(np.polyval(den, roots))
    # residual scale grows with |root|^n; normalize against it
    scale = np.maximum(1.0, np.abs(roots)) ** tf.order
    if np.any(residuals > tol * scale):
        raise NumericalError(
            f"root refinement failed: residuals {residuals}, tolerance {tol}")
    return roots


def _pair_conjugates(roots: np.ndarray) -> list[complex]:
    """One representative per real root / conjugate pair (positive imag part)."""
    reps: list[complex] = []
    used = np.zeros(len(roots), dtype=bool)
    order = sorted(range(len(roots)),
                   key=lambda i: (roots[i].real, abs(roots[i].imag)))
    for i in order:
        if used[i]:
            continue
        r = roots[i]
        if abs(r.imag) <= _REAL_POLE_TOL * (1.0 + abs(r)):
            reps.append(complex(r.real, 0.0))
            used[i] = True
            continue
        # find the closest unused conjugate
        candidates = [j for j in range(len(roots))
                      if not used[j] and j != i and roots[j].imag * r.imag < 0]
        if not candidates:
            raise NumericalError(f"unpaired complex root {r}")
        j = min(candidates, key=lambda j: abs(roots[j] - np.conj(r)))
        used[i] = used[j] = True
        reps.append(complex(r.real, abs(r.imag)))
    return reps


def partial_fractions(tf: DiscreteTransferFunction,
                      min_pole_distance: float = 1e-6) -> SubsystemSet:
    """Decompose B(z)/A(z) into direct term + sum of gain/(z - pole) terms.

    Residues come from gain_i = B(p_i)/A'(p_i); the direct term is b0.
    Conjugate pairs are stored once, with the positive-imaginary pole.

    Raises:
        DegeneratePolesError: if two poles are closer than ``min_pole_distance``.
    """
    pole_values = poles(tf)
    for i in range(len(pole_values)):
        for j in range(i + 1, len(pole_values)):
            if abs(pole_values[i] - pole_values[j]) <= min_pole_distance:
                raise DegeneratePolesError(
                    f"poles {pole_values[i]} and {pole_values[j]} are within "
                    f"{min_pole_distance}",
                    poles=(complex(pole_values[i]), complex(pole_values[j])))

    den = tf.denominator()
    dden = np.polyder(den)
    subsystems = []
    for p in _pair_conjugates(pole_values):
        residue = np.polyval(tf.b, p) / np.polyval(dden, p)
        subsystems.append(FirstOrderSubsystem(complex(residue), complex(p),
                                              tf.sample_interval))
    return SubsystemSet(tuple(subsystems), float(tf.b[0]), tf.sample_interval)


def reconstruct(subsystem_set: SubsystemSet) -> DiscreteTransferFunction:
    """Recombine a subsystem set over a common denominator."""
    factors = []   # real polynomial factors of the denominator
    numers = []    # matching numerator polynomials of each term
    for sub in subsystem_set.subsystems:
        sub_tf = sub.transfer_function()
        factors.append(sub_tf.denominator())
        numers.append(sub_tf.b[1:])  # strip the structural leading zero
    if not factors:
        raise DegenerateModelError("no subsystems to reconstruct")

    den = np.array([1.0])
    for f in factors:
        den = np.polymul(den, f)
    order = den.size - 1

    num = subsystem_set.direct_term * den
    for i, ni in enumerate(numers):
        cross = np.array([1.0])
        for j, f in enumerate(factors):
            if j != i:
                cross = np.polymul(cross, f)
        num = np.polyadd(num, np.polymul(ni, cross))

    b = np.zeros(order + 1)
    b[order + 1 - num.size:] = num
    return DiscreteTransferFunction(den[1:], b, subsystem_set.sample_interval)


def prune(subsystem_set: SubsystemSet,
          period_threshold: float = 1.0) -> DiscreteTransferFunction:
    """Drop long-period complex pairs and unstable subsystems, then recombine.

    Complex pairs whose oscillatory period exceeds ``period_threshold``
    (default 1 s) are noise-chasing for a slow signal and are removed, as is
    any subsystem with |pole| >= 1 (an unstable term makes the free/forced
    split meaningless).
    """
    kept = []
    for sub in subsystem_set.subsystems:
        if not sub.is_stable:
            continue
        period = sub.oscillatory_period
        if period is not None and period > period_threshold:
            continue
        kept.append(sub)
    if not kept:
        raise DegenerateModelError(
            "pruning removed every subsystem; no usable model remains")
    return reconstruct(SubsystemSet(tuple(kept), subsystem_set.direct_term,
                                    subsystem_set.sample_interval))


def time_constant(pole: float, sample_interval: float) -> float:
    """Exponential e-folding time -Ts/ln(pole) for a real pole in (0, 1)."""
    if not 0.0 < pole < 1.0:
        raise InvalidParameterError(
            f"time constant defined only for poles in (0, 1), got {pole}")
    if sample_interval <= 0:
        raise InvalidParameterError("sample_interval must be positive")
    return -sample_interval / np.log(pole)
