"""One round of the entanglement-free (t, n) sharing protocol.

A round runs four phases:

1. classical Shamir dealing of k private values s_v;
2. dealer encoding: each qudit starts in ``QFT|0>`` and receives
   ``U_{0, S_v + d - s_v}``;
3. the active participants, in order, apply ``U_{p, p + q}`` with a fresh
   random p and their Lagrange component q;
4. the last participant applies the inverse QFT, measures, and publishes R_v.
   Everybody then reveals their randoms and recovers ``S_v = R_v - sum p``.

In verifiable mode the k-th secret is the product of the others and the
recovered tuple is checked against that relation.

Adversaries plug into a round through three optional hooks on the ``attack``
object: ``on_channel(hop, states, rng)``, ``on_publish(measured, rng)`` and
``on_reveal(holder_id, randoms, rng)``. See :mod:`efqss.adversary`.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Any, Mapping, Sequence, Union

import numpy as np

from .errors import ConfigError, PrematureRecovery, WriteOnceViolation
from .field import FieldElement, IntLike, Polynomial, PrimeModulus
from .qudit import (
    Basis,
    FourierOrbitState,
    StateVector,
    fidelity,
    iqft_apply,
    measure_computational,
    orbit_pauli_apply,
    pauli_apply,
    qft_apply,
    vector_to_orbit,
)
from .shamir import (
    DealerSecrets,
    Share,
    deal_shares,
    default_points,
    lagrange_component,
    random_polynomial,
    validate_deal,
)

Qudit = Union[FourierOrbitState, StateVector]


class Mode(str, enum.Enum):
    BASIC = "Basic"
    VERIFIABLE = "Verifiable"
    UNKNOWN_STATE = "UnknownState"


class Verdict(str, enum.Enum):
    PASS = "Pass"
    FAIL = "Fail"
    NOT_APPLICABLE = "NotApplicable"


class Backend(str, enum.Enum):
    ORBIT = "orbit"
    STATEVECTOR = "statevector"


@dataclass(frozen=True)
class ProtocolConfig:
    """Static description of a round.

    ``active_set`` lists holder ids (1-based) in communication order; the last
    one measures. ``strict_threshold=False`` admits fewer than t active
    participants, which the protocol itself never notices.
    """

    d: PrimeModulus
    t: int
    n: int
    k: int = 1
    xs: tuple[FieldElement, ...] | None = None
    active_set: tuple[int, ...] | None = None
    mode: Mode = Mode.BASIC
    seed: int | None = None
    backend: Backend = Backend.ORBIT
    strict_threshold: bool = True

    def __post_init__(self):
        d = self.d if isinstance(self.d, PrimeModulus) else PrimeModulus(int(self.d))
        object.__setattr__(self, "d", d)
        object.__setattr__(self, "mode", Mode(self.mode))
        object.__setattr__(self, "backend", Backend(self.backend))
        xs = self.xs
        if xs is None:
            xs = default_points(self.n, d)
        xs = tuple(x if isinstance(x, FieldElement) else d(int(x)) for x in xs)
        object.__setattr__(self, "xs", xs)
        active = self.active_set
        if active is None:
            active = tuple(range(1, self.n + 1))
        object.__setattr__(self, "active_set", tuple(int(a) for a in active))
        self._validate()

    def _validate(self) -> None:
        validate_deal(self.t, self.n, list(self.xs), self.d)
        if self.k < 1:
            raise ConfigError(f"k must be positive, got {self.k}")
        if self.mode is Mode.VERIFIABLE and self.k < 2:
            raise ConfigError("verifiable mode needs k >= 2")
        if self.mode is Mode.UNKNOWN_STATE and self.k != 1:
            raise ConfigError("unknown-state mode shares exactly one qudit (k=1)")
        active = self.active_set
        if not active:
            raise ConfigError("active set is empty")
        if len(set(active)) != len(active):
            raise ConfigError("active set repeats a holder")
        for h in active:
            if not 1 <= h <= self.n:
                raise ConfigError(f"holder id {h} outside 1..{self.n}")
        if self.strict_threshold and len(active) < self.t:
            raise ConfigError(f"{len(active)} active participants is below threshold t={self.t}")
        if self.seed is not None and not 0 <= self.seed < 2**64:
            raise ConfigError("seed must fit in 64 unsigned bits")

    @property
    def m(self) -> int:
        return len(self.active_set)

    @property
    def last(self) -> int:
        return self.active_set[-1]

    @property
    def active_xs(self) -> list[FieldElement]:
        return [self.xs[h - 1] for h in self.active_set]

    def rng(self) -> np.random.Generator:
        return np.random.default_rng(self.seed)

    def to_dict(self) -> dict:
        return {
            "d": self.d.d,
            "t": self.t,
            "n": self.n,
            "k": self.k,
            "xs": [x.value for x in self.xs],
            "active_set": list(self.active_set),
            "mode": self.mode.value,
            "backend": self.backend.value,
            "strict_threshold": self.strict_threshold,
        }


@dataclass
class PartyState:
    holder_id: int
    shares: list[Share]
    random_numbers: list[FieldElement]
    components: list[FieldElement] = field(default_factory=list)

    def compute_components(self, active_xs: Sequence[FieldElement]) -> list[FieldElement]:
        self.components = [lagrange_component(sh, active_xs) for sh in self.shares]
        return self.components


class ClassicalBoard:
    """Write-once public board: results first, then an atomic reveal."""

    def __init__(self, modulus: PrimeModulus, k: int):
        self.modulus = modulus
        self.k = k
        self._published: tuple[FieldElement, ...] | None = None
        self._revealed: dict[int, tuple[FieldElement, ...]] | None = None

    @property
    def published_results(self) -> tuple[FieldElement, ...] | None:
        return self._published

    @property
    def revealed_randoms(self) -> dict[int, tuple[FieldElement, ...]] | None:
        return None if self._revealed is None else dict(self._revealed)

    def publish(self, results: Sequence[FieldElement]) -> None:
        if self._published is not None:
            raise WriteOnceViolation("measurement results were already published")
        if len(results) != self.k:
            raise ConfigError(f"expected {self.k} results, got {len(results)}")
        self._published = tuple(results)

    def reveal(self, randoms: Mapping[int, Sequence[FieldElement]]) -> None:
        if self._published is None:
            raise PrematureRecovery("randoms may only be revealed after publication")
        if self._revealed is not None:
            raise WriteOnceViolation("randoms were already revealed")
        self._revealed = {h: tuple(r) for h, r in randoms.items()}

    @property
    def complete(self) -> bool:
        return self._published is not None and self._revealed is not None


@dataclass
class Transcript:
    config: ProtocolConfig
    seed: int | None
    secrets: list[int]
    private_values: list[int]
    shares: dict[int, list[int]]
    randoms: dict[int, list[int]]
    components: dict[int, list[int]]
    channel_trace: list[list[list[int] | None]]
    fourier_exponent_raw: list[int] | None
    measured_R: list[int]
    published_R: list[int]
    revealed: dict[int, list[int]]
    recovered: dict[int, list[int]]
    verdict: Verdict
    attack: dict | None = None
    anomalies: list[str] = field(default_factory=list)
    fidelity: float | None = None

    @property
    def public_recovery(self) -> list[int]:
        """Values recovered from the board alone (what an honest party sees)."""
        d = self.config.d.d
        sums = [sum(r[v] for r in self.revealed.values()) for v in range(self.config.k)]
        return [(R - s) % d for R, s in zip(self.published_R, sums)]

    def honest_holders(self) -> list[int]:
        actor = (self.attack or {}).get("actor")
        return [h for h in self.config.active_set if h != actor]

    def to_dict(self) -> dict:
        from . import __version__

        def keyed(m):
            return {str(h): v for h, v in m.items()}

        return {
            "config": self.config.to_dict(),
            "shares": keyed(self.shares),
            "randoms": keyed(self.randoms),
            "components": keyed(self.components),
            "published_R": list(self.published_R),
            "recovered": keyed(self.recovered),
            "verdict": self.verdict.value,
            "attack": self.attack,
            "seed": self.seed,
            "version": __version__,
            "secrets": list(self.secrets),
            "private_values": list(self.private_values),
            "measured_R": list(self.measured_R),
            "revealed": keyed(self.revealed),
            "fourier_exponent_raw": self.fourier_exponent_raw,
            "channel_trace": self.channel_trace,
            "anomalies": list(self.anomalies),
            "fidelity": self.fidelity,
        }


def _as_elements(values: Sequence[IntLike], modulus: PrimeModulus) -> list[FieldElement]:
    out = []
    for v in values:
        if isinstance(v, FieldElement):
            if v.modulus != modulus:
                raise ConfigError("secret lives in a different field")
            out.append(v)
        else:
            out.append(modulus(int(v)))
    return out


def complete_secrets(
    secrets: Sequence[IntLike], k: int, mode: Mode, modulus: PrimeModulus
) -> list[FieldElement]:
    """Return all k encoded values, appending the product check value if verifiable."""
    secrets = _as_elements(secrets, modulus)
    mode = Mode(mode)
    if mode is Mode.VERIFIABLE:
        if len(secrets) != k - 1:
            raise ConfigError(f"verifiable mode takes k-1={k - 1} secrets, got {len(secrets)}")
        check = modulus(1)
        for s in secrets:
            check = check * s
        return secrets + [check]
    if len(secrets) != k:
        raise ConfigError(f"{mode.value} mode takes k={k} secrets, got {len(secrets)}")
    return secrets


def dealer_encode(
    secrets: Sequence[IntLike],
    dealer: DealerSecrets,
    mode: Mode = Mode.BASIC,
    backend: Backend = Backend.ORBIT,
) -> list[Qudit]:
    """Prepare ``U_{0, S_v + d - s_v} QFT|0>`` for every v."""
    mod = dealer.private_values[0].modulus
    full = complete_secrets(secrets, dealer.k, mode, mod)
    states: list[Qudit] = []
    for S, s in zip(full, dealer.private_values):
        shift = S + (mod.d - s.value)
        if Backend(backend) is Backend.ORBIT:
            start = FourierOrbitState.fourier(0, mod)
            states.append(orbit_pauli_apply(0, shift, start))
        else:
            start = qft_apply(StateVector.basis(0, mod))
            states.append(pauli_apply(0, shift, start))
    return states


def _apply(m: FieldElement, n: FieldElement, state: Qudit) -> Qudit:
    if isinstance(state, FourierOrbitState):
        return orbit_pauli_apply(m, n, state)
    return pauli_apply(m, n, state)


def participant_step(
    states: Sequence[Qudit], party: PartyState, active_xs: Sequence[FieldElement]
) -> list[Qudit]:
    """Apply ``U_{p_v, p_v + q_v}`` to qudit v; q_v is stored on ``party``."""
    qs = party.compute_components(active_xs)
    return [_apply(p, p + q, st) for st, p, q in zip(states, party.random_numbers, qs)]


def _measure(state: Qudit, rng: np.random.Generator) -> FieldElement:
    if isinstance(state, FourierOrbitState):
        if state.basis_tag is not Basis.FOURIER:
            # IQFT of a computational state is spread uniformly; fall back.
            from .qudit import orbit_to_vector

            return measure_computational(iqft_apply(orbit_to_vector(state)), rng)
        # IQFT maps w^a QFT|j> to w^a |j>; the outcome is j with certainty.
        return state.exponent
    return measure_computational(iqft_apply(state), rng)


def measure_and_publish(
    states: Sequence[Qudit],
    board: ClassicalBoard,
    rng: np.random.Generator,
    attack: Any = None,
) -> list[FieldElement]:
    """Inverse QFT, measure, publish. Returns what the measurer actually saw.

    The board may hold different values when ``attack`` tampers with
    publication.
    """
    measured = [_measure(st, rng) for st in states]
    published = list(measured)
    hook = getattr(attack, "on_publish", None)
    if hook is not None:
        published = list(hook(measured, rng))
    board.publish(published)
    return measured


def recover_secrets(
    board: ClassicalBoard,
    own_view: Mapping[int, Sequence[FieldElement]] | None = None,
    own_results: Sequence[FieldElement] | None = None,
) -> list[FieldElement]:
    """``p_v0 = R_v - sum_j p_vj`` from the board.

    ``own_view`` overrides revealed randoms with values the caller knows to be
    true (its own), ``own_results`` overrides the published results (only the
    measurer has these).
    """
    if not board.complete:
        raise PrematureRecovery("recovery needs both published results and revealed randoms")
    view = board.revealed_randoms
    if own_view:
        view.update({h: tuple(r) for h, r in own_view.items()})
    results = board.published_results if own_results is None else tuple(own_results)
    out = []
    for v in range(board.k):
        acc = results[v]
        for randoms in view.values():
            acc = acc - randoms[v]
        out.append(acc)
    return out


def verify_consistency(recovered: Sequence[FieldElement], mode: Mode = Mode.VERIFIABLE) -> Verdict:
    if Mode(mode) is not Mode.VERIFIABLE:
        return Verdict.NOT_APPLICABLE
    if len(recovered) < 2:
        raise ConfigError("verification needs at least two recovered values")
    prod = recovered[0].modulus(1)
    for r in recovered[:-1]:
        prod = prod * r
    return Verdict.PASS if prod == recovered[-1] else Verdict.FAIL


def _trace_entry(states: Sequence[Qudit]) -> list[list[int] | None]:
    row = []
    for st in states:
        orb = st if isinstance(st, FourierOrbitState) else vector_to_orbit(st)
        if orb is None or orb.basis_tag is not Basis.FOURIER:
            row.append(None)
        else:
            row.append([orb.exponent.value, orb.phase_exp.value])
    return row


def _ints(values: Sequence[FieldElement]) -> list[int]:
    return [v.value for v in values]


def run_round(
    config: ProtocolConfig,
    secrets: Sequence[IntLike],
    attack: Any = None,
    rng: np.random.Generator | None = None,
    *,
    private_values: Sequence[IntLike] | None = None,
    polynomials: Sequence[Sequence[int]] | None = None,
    randoms: Mapping[int, Sequence[int]] | None = None,
) -> Transcript:
    """Run one full round and return its transcript.

    ``polynomials`` (coefficient lists, constant term first) and ``randoms``
    (holder id -> k values) pin what would otherwise be sampled. The random
    draw order is: private values, polynomial coefficients, participant
    randoms, measurement, attack choices.
    """
    if config.mode is Mode.UNKNOWN_STATE:
        raise ConfigError("use share_unknown_state for unknown-state mode")
    if rng is None:
        rng = config.rng()
    mod, k = config.d, config.k
    backend = config.backend
    if attack is not None and hasattr(attack, "bind"):
        attack = attack.bind(config)
    if getattr(attack, "requires_statevector", False):
        backend = Backend.STATEVECTOR

    full_secrets = complete_secrets(secrets, k, config.mode, mod)

    if polynomials is not None:
        polys = [Polynomial.from_ints(c, mod) for c in polynomials]
        s_values = [p.constant for p in polys]
    else:
        if private_values is None:
            s_values = [mod(int(v)) for v in rng.integers(0, mod.d, size=k)]
        else:
            s_values = _as_elements(private_values, mod)
        polys = [random_polynomial(s, config.t, rng) for s in s_values]
    if len(polys) != k:
        raise ConfigError(f"expected {k} polynomials, got {len(polys)}")
    dealer, share_matrix = deal_shares(s_values, config.t, config.n, config.xs, polynomials=polys)

    parties = []
    for h in config.active_set:
        if randoms is not None and h in randoms:
            ps = _as_elements(randoms[h], mod)
            if len(ps) != k:
                raise ConfigError(f"holder {h} needs {k} random numbers")
        else:
            ps = [mod(int(v)) for v in rng.integers(0, mod.d, size=k)]
        parties.append(PartyState(h, [share_matrix[v][h - 1] for v in range(k)], ps))

    states = dealer_encode(full_secrets, dealer, Mode.BASIC, backend)
    trace = [_trace_entry(states)]
    raw = [S.value + (mod.d - s.value) for S, s in zip(full_secrets, s_values)]
    anomalies: list[str] = []
    on_channel = getattr(attack, "on_channel", None)
    active_xs = config.active_xs

    for hop, party in enumerate(parties):
        if on_channel is not None:
            states = list(on_channel(hop, states, rng))
        states = participant_step(states, party, active_xs)
        for v in range(k):
            raw[v] += party.random_numbers[v].value + party.components[v].value
        entry = _trace_entry(states)
        if any(e is None for e in entry):
            anomalies.append(f"hop {hop}: qudit left the Fourier orbit")
        trace.append(entry)

    board = ClassicalBoard(mod, k)
    measured = measure_and_publish(states, board, rng, attack)

    on_reveal = getattr(attack, "on_reveal", None)
    reveals = {}
    for party in parties:
        r = party.random_numbers
        if on_reveal is not None:
            r = list(on_reveal(party.holder_id, r, rng))
        reveals[party.holder_id] = r
    board.reveal(reveals)

    recovered = {}
    for party in parties:
        own = {party.holder_id: party.random_numbers}
        own_results = measured if party.holder_id == config.last else None
        recovered[party.holder_id] = recover_secrets(board, own, own_results)

    public = recover_secrets(board)
    verdict = verify_consistency(public, config.mode)

    return Transcript(
        config=config,
        seed=config.seed,
        secrets=_ints(full_secrets),
        private_values=_ints(s_values),
        shares={
            h: [share_matrix[v][h - 1].y.value for v in range(k)] for h in range(1, config.n + 1)
        },
        randoms={p.holder_id: _ints(p.random_numbers) for p in parties},
        components={p.holder_id: _ints(p.components) for p in parties},
        channel_trace=trace,
        fourier_exponent_raw=raw if backend is Backend.ORBIT else None,
        measured_R=_ints(measured),
        published_R=_ints(board.published_results),
        revealed={h: _ints(r) for h, r in board.revealed_randoms.items()},
        recovered={h: _ints(r) for h, r in recovered.items()},
        verdict=verdict,
        attack=attack.to_dict() if hasattr(attack, "to_dict") else None,
        anomalies=anomalies,
    )


def share_unknown_state(
    psi: StateVector,
    config: ProtocolConfig,
    rng: np.random.Generator | None = None,
    *,
    polynomial: Sequence[int] | None = None,
    corruptions: Mapping[int, int] | None = None,
) -> tuple[StateVector, Transcript]:
    """Share an arbitrary qudit state: dealer applies ``U_{0, d-s}``, each
    participant ``U_{0, c_j}``. With every component honest the phases cancel.

    ``corruptions`` maps holder id to an offset added to that holder's
    component, modelling a wrong share.
    """
    if config.mode is not Mode.UNKNOWN_STATE:
        raise ConfigError("share_unknown_state requires unknown-state mode")
    if psi.modulus != config.d:
        raise ConfigError("state dimension differs from the configured modulus")
    if rng is None:
        rng = config.rng()
    mod = config.d
    if polynomial is not None:
        poly = Polynomial.from_ints(polynomial, mod)
    else:
        poly = random_polynomial(mod(int(rng.integers(0, mod.d))), config.t, rng)
    s = poly.constant
    _, share_matrix = deal_shares([s], config.t, config.n, config.xs, polynomials=[poly])

    state = pauli_apply(0, mod.d - s.value, psi)
    components = {}
    shares = {h: [share_matrix[0][h - 1].y.value] for h in range(1, config.n + 1)}
    for h in config.active_set:
        share = share_matrix[0][h - 1]
        c = lagrange_component(share, config.active_xs)
        if corruptions and h in corruptions:
            c = c + corruptions[h]
        components[h] = [c.value]
        state = pauli_apply(0, c, state)

    fid = fidelity(state, psi)
    transcript = Transcript(
        config=config,
        seed=config.seed,
        secrets=[],
        private_values=[s.value],
        shares=shares,
        randoms={},
        components=components,
        channel_trace=[],
        fourier_exponent_raw=None,
        measured_R=[],
        published_R=[],
        revealed={},
        recovered={},
        verdict=Verdict.NOT_APPLICABLE,
        attack={"kind": "CorruptComponent", "offsets": {str(h): o for h, o in corruptions.items()}}
        if corruptions
        else None,
        fidelity=fid,
    )
    return state, transcript
