"""Cheating and eavesdropping scenarios, and Monte Carlo detection rates.

Four scenarios are modelled:

``FakeMeasurement``
    The last participant publishes uniformly random results but recovers the
    true secrets privately from what it really measured.
``FakeRandom``
    One participant reveals uniformly random numbers instead of its own.
``InterceptResend``
    An eavesdropper measures the in-flight qudits in the computational basis
    at a given hop and forwards the collapsed states.
``StructuredShift``
    (k = 2 only) the last participant adds the same offset to both results.
    The product check cannot see this because ``p_10 + δ = p_20 + δ`` exactly
    when ``p_10 = p_20``. This goes beyond the uniform-fake model behind the
    1/d error-rate figure and is reported as an observed gap.
"""

from __future__ import annotations

import enum
import math
from dataclasses import asdict, dataclass, replace
from fractions import Fraction
from typing import Sequence

import numpy as np

from .analysis import theoretical_detection_rate
from .errors import ConfigError
from .field import FieldElement, PrimeModulus, lagrange_weight
from .protocol import Mode, ProtocolConfig, Transcript, Verdict, run_round
from .qudit import StateVector, measure_computational

EAVESDROPPER = "Eavesdropper"


class AttackKind(str, enum.Enum):
    FAKE_MEASUREMENT = "FakeMeasurement"
    FAKE_RANDOM = "FakeRandom"
    INTERCEPT_RESEND = "InterceptResend"
    STRUCTURED_SHIFT = "StructuredShift"

    @classmethod
    def parse(cls, name: str) -> "AttackKind":
        key = name.replace("-", "").replace("_", "").lower()
        for kind in cls:
            if kind.value.lower() == key:
                return kind
        raise ConfigError(f"unknown attack kind {name!r}")


@dataclass(frozen=True)
class AttackScenario:
    """An adversary injected into a round.

    ``actor`` is a holder id, or :data:`EAVESDROPPER` for channel attacks.
    Leaving it as ``None`` picks the natural actor when the scenario is bound
    to a config: the last participant for result tampering, the first
    participant for fake randoms.
    """

    kind: AttackKind
    actor: int | str | None = None
    delta: int = 0
    hop: int = 0
    exclude_true: bool = False

    def __post_init__(self):
        object.__setattr__(self, "kind", AttackKind(self.kind))

    @property
    def requires_statevector(self) -> bool:
        return self.kind is AttackKind.INTERCEPT_RESEND

    def bind(self, config: ProtocolConfig) -> "AttackScenario":
        """Fill in the default actor and check the scenario fits ``config``."""
        kind, actor = self.kind, self.actor
        if kind in (AttackKind.FAKE_MEASUREMENT, AttackKind.STRUCTURED_SHIFT):
            actor = config.last if actor is None else actor
            if actor != config.last:
                raise ConfigError(f"{kind.value} must be mounted by the measurer (holder {config.last})")
        elif kind is AttackKind.FAKE_RANDOM:
            actor = config.active_set[0] if actor is None else actor
            if actor not in config.active_set:
                raise ConfigError(f"holder {actor} is not an active participant")
        elif kind is AttackKind.INTERCEPT_RESEND:
            actor = EAVESDROPPER if actor is None else actor
            if actor != EAVESDROPPER:
                raise ConfigError("intercept-resend is mounted by the eavesdropper")
            if not 0 <= self.hop < config.m:
                raise ConfigError(f"hop must lie in 0..{config.m - 1}, got {self.hop}")
        if kind is AttackKind.STRUCTURED_SHIFT and config.k != 2:
            raise ConfigError("structured shift is defined for k=2 only")
        return replace(self, actor=actor)

    def _fake(self, true: Sequence[FieldElement], rng: np.random.Generator) -> list[FieldElement]:
        mod = true[0].modulus
        if self.exclude_true and mod.d > 1:
            offsets = rng.integers(1, mod.d, size=len(true))
            return [t + int(o) for t, o in zip(true, offsets)]
        return [mod(int(v)) for v in rng.integers(0, mod.d, size=len(true))]

    def on_channel(self, hop, states, rng):
        if self.kind is not AttackKind.INTERCEPT_RESEND or hop != self.hop:
            return states
        out = []
        for st in states:
            outcome = measure_computational(st, rng)
            out.append(StateVector.basis(outcome, st.modulus))
        return out

    def on_publish(self, measured, rng):
        if self.kind is AttackKind.FAKE_MEASUREMENT:
            return self._fake(measured, rng)
        if self.kind is AttackKind.STRUCTURED_SHIFT:
            return [r + self.delta for r in measured]
        return measured

    def on_reveal(self, holder_id, randoms, rng):
        if self.kind is AttackKind.FAKE_RANDOM and holder_id == self.actor:
            return self._fake(randoms, rng)
        return randoms

    def to_dict(self) -> dict:
        out = asdict(self)
        out["kind"] = self.kind.value
        return out


def apply_attack(
    scenario: AttackScenario,
    config: ProtocolConfig,
    secrets: Sequence[int],
    rng: np.random.Generator | None = None,
    **pinned,
) -> Transcript:
    """Run one round with ``scenario`` injected at its phase."""
    return run_round(config, secrets, scenario.bind(config), rng, **pinned)


@dataclass(frozen=True)
class DetectionStats:
    trials: int
    detected: int
    rate: Fraction
    theoretical: Fraction
    binomial_3sigma_halfwidth: float
    # Trials where the cheater failed to recover the true secrets.
    cheater_recovery_failures: int = 0
    # Trials where the verdict disagreed with the direct algebraic condition.
    condition_mismatches: int = 0

    @property
    def within_3sigma(self) -> bool:
        return abs(float(self.rate) - float(self.theoretical)) <= self.binomial_3sigma_halfwidth

    def to_dict(self) -> dict:
        return {
            "trials": self.trials,
            "detected": self.detected,
            "rate": float(self.rate),
            "rate_exact": f"{self.rate.numerator}/{self.rate.denominator}",
            "theoretical": float(self.theoretical),
            "theoretical_exact": f"{self.theoretical.numerator}/{self.theoretical.denominator}",
            "binomial_3sigma_halfwidth": self.binomial_3sigma_halfwidth,
            "within_3sigma": self.within_3sigma,
            "cheater_recovery_failures": self.cheater_recovery_failures,
            "condition_mismatches": self.condition_mismatches,
        }


def _stats(trials: int, detected: int, d: int, **extra) -> DetectionStats:
    theo = theoretical_detection_rate(d)
    p = float(theo)
    half = 3.0 * math.sqrt(p * (1.0 - p) / trials)
    return DetectionStats(trials, detected, Fraction(detected, trials), theo, half, **extra)


def _prod_mod(a: np.ndarray, d: int) -> np.ndarray:
    out = np.ones(a.shape[0], dtype=np.int64)
    for col in range(a.shape[1]):
        out = out * a[:, col] % d
    return out


def orbit_rounds_batch(
    d: int,
    secrets: np.ndarray,
    private_values: np.ndarray,
    coefficients: np.ndarray,
    randoms: np.ndarray,
    active_xs: Sequence[int],
) -> dict[str, np.ndarray]:
    """Honest rounds in the orbit backend, vectorized over the first axis.

    Shapes: ``secrets`` and ``private_values`` (trials, k); ``coefficients``
    (trials, k, t-1) for the non-constant terms; ``randoms`` (trials, m, k) in
    active-set order. Every quantity is integer arithmetic mod d, the same
    update rule as :func:`efqss.qudit.orbit_pauli_apply`.
    """
    mod = PrimeModulus(d)
    xs = [mod(x) for x in active_xs]
    weights = np.array([lagrange_weight(xs, x).value for x in xs], dtype=np.int64)

    trials, k = secrets.shape
    m = len(xs)
    shares = np.empty((trials, m, k), dtype=np.int64)
    for j, x in enumerate(active_xs):
        acc = np.zeros((trials, k), dtype=np.int64)
        for r in range(coefficients.shape[2] - 1, -1, -1):
            acc = (acc * x + coefficients[:, :, r]) % d
        shares[:, j, :] = (acc * x + private_values) % d
    components = shares * weights[None, :, None] % d

    exponent = (secrets - private_values) % d
    phase = np.zeros_like(exponent)
    for j in range(m):
        p = randoms[:, j, :]
        exponent = (exponent + p + components[:, j, :]) % d
        phase = (phase - p * exponent) % d
    return {
        "shares": shares,
        "components": components,
        "exponent": exponent,
        "phase": phase,
        "measured": exponent,
    }


def _batch_detection(
    scenario: AttackScenario, config: ProtocolConfig, trials: int, rng: np.random.Generator
) -> DetectionStats:
    d, k, t, m = config.d.d, config.k, config.t, config.m
    base = rng.integers(0, d, size=(trials, k - 1))
    secrets = np.concatenate([base, _prod_mod(base, d)[:, None]], axis=1)
    private = rng.integers(0, d, size=(trials, k))
    coeffs = rng.integers(0, d, size=(trials, k, t - 1))
    randoms = rng.integers(0, d, size=(trials, m, k))
    out = orbit_rounds_batch(d, secrets, private, coeffs, randoms, [x.value for x in config.active_xs])
    measured = out["measured"]

    published = measured.copy()
    revealed = randoms.copy()
    actor_idx = config.active_set.index(scenario.actor)

    def fake(true):
        if scenario.exclude_true:
            return (true + rng.integers(1, d, size=true.shape)) % d
        return rng.integers(0, d, size=true.shape)

    if scenario.kind is AttackKind.FAKE_MEASUREMENT:
        published = fake(measured)
    elif scenario.kind is AttackKind.STRUCTURED_SHIFT:
        published = (measured + scenario.delta) % d
    elif scenario.kind is AttackKind.FAKE_RANDOM:
        revealed[:, actor_idx, :] = fake(randoms[:, actor_idx, :])

    public = (published - revealed.sum(axis=1)) % d
    passed = _prod_mod(public[:, :-1], d) == public[:, -1]

    # The actor's private view: true randoms for itself, true results if measurer.
    own_randoms = revealed.copy()
    own_randoms[:, actor_idx, :] = randoms[:, actor_idx, :]
    own_results = measured if scenario.actor == config.last else published
    own = (own_results - own_randoms.sum(axis=1)) % d
    cheater_fail = int(np.any(own != secrets, axis=1).sum())

    mismatches = 0
    if scenario.kind is AttackKind.FAKE_MEASUREMENT:
        totals = randoms.sum(axis=1)
        lhs = np.ones(trials, dtype=np.int64)
        for u in range(k - 1):
            lhs = lhs * ((published[:, u] - totals[:, u]) % d) % d
        rhs = (published[:, k - 1] - totals[:, k - 1]) % d
        mismatches = int(((lhs == rhs) != passed).sum())

    detected = int((~passed).sum())
    return _stats(
        trials, detected, d, cheater_recovery_failures=cheater_fail, condition_mismatches=mismatches
    )


def _scalar_detection(
    scenario: AttackScenario, config: ProtocolConfig, trials: int, rng: np.random.Generator
) -> DetectionStats:
    d, k = config.d.d, config.k
    detected = cheater_fail = mismatches = 0
    for child in rng.spawn(trials):
        secrets = [int(v) for v in child.integers(0, d, size=k - 1)]
        tr = run_round(config, secrets, scenario, child)
        if tr.verdict is Verdict.FAIL:
            detected += 1
        if scenario.actor in tr.recovered and tr.recovered[scenario.actor] != tr.secrets:
            if scenario.kind is not AttackKind.INTERCEPT_RESEND:
                cheater_fail += 1
        honest = [tr.recovered[h] for h in tr.honest_holders()]
        if any(r != tr.public_recovery for r in honest):
            mismatches += 1
    return _stats(
        trials, detected, d, cheater_recovery_failures=cheater_fail, condition_mismatches=mismatches
    )


def estimate_detection_rate(
    scenario: AttackScenario,
    config: ProtocolConfig,
    trials: int,
    rng: np.random.Generator | None = None,
    engine: str = "auto",
) -> DetectionStats:
    """Fraction of independent rounds in which honest verifiers see Fail.

    Each trial deals fresh polynomials, private values, secrets and randoms.
    ``engine="batch"`` runs the orbit arithmetic vectorized over trials;
    ``engine="scalar"`` runs :func:`run_round` per trial on its own spawned
    stream. ``auto`` uses the batch engine unless the scenario needs the
    statevector backend.
    """
    if trials < 1:
        raise ConfigError("trials must be positive")
    if config.mode is not Mode.VERIFIABLE:
        raise ConfigError("detection rates are only defined in verifiable mode")
    scenario = scenario.bind(config)
    if rng is None:
        rng = config.rng()
    if engine == "auto":
        engine = "scalar" if scenario.requires_statevector else "batch"
    if engine == "batch":
        if scenario.requires_statevector:
            raise ConfigError("intercept-resend needs the scalar statevector engine")
        return _batch_detection(scenario, config, trials, rng)
    if engine == "scalar":
        return _scalar_detection(scenario, config, trials, rng)
    raise ConfigError(f"unknown engine {engine!r}")
