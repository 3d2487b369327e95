"""Single d-level quantum system simulation.

Two backends:

* :class:`StateVector` -- dense complex amplitudes (numerical).
* :class:`FourierOrbitState` -- the exact pair (phase exponent a, index j)
  representing ``w^a QFT|j>`` (Fourier tag) or ``w^a |j>`` (computational tag),
  where ``w = exp(2 pi i / d)``.

Generalized Pauli operators ``U_{m,n} = X^m Z^n`` keep the Fourier orbit
closed: ``U_{m,n} QFT|j> = w^{-m(j+n)} QFT|j+n>``.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import ConfigError, DimensionMismatch, NotNormalized, WrongBasis
from .field import FieldElement, IntLike, PrimeModulus

MAX_DIMENSION = 10_000
NORM_TOL = 1e-9


@lru_cache(maxsize=64)
def roots_of_unity(d: int) -> np.ndarray:
    """Table ``w^r`` for r = 0..d-1. Powers are looked up by index mod d."""
    if d > MAX_DIMENSION:
        raise ConfigError(f"statevector backend supports d <= {MAX_DIMENSION}, got {d}")
    r = np.arange(d)
    table = np.exp(2j * np.pi * r / d)
    table.setflags(write=False)
    return table


def omega_power(d: int, r) -> np.ndarray | complex:
    return roots_of_unity(d)[np.mod(r, d)]


@lru_cache(maxsize=16)
def qft_matrix(d: int) -> np.ndarray:
    jk = np.outer(np.arange(d), np.arange(d)) % d
    mat = roots_of_unity(d)[jk] / np.sqrt(d)
    mat.setflags(write=False)
    return mat


def _int(x: IntLike) -> int:
    return x.value if isinstance(x, FieldElement) else int(x)


@dataclass(frozen=True, eq=False)
class StateVector:
    amplitudes: np.ndarray
    modulus: PrimeModulus

    def __post_init__(self):
        amps = np.array(self.amplitudes, dtype=np.complex128).reshape(-1)
        if amps.shape[0] != self.modulus.d:
            raise DimensionMismatch(
                f"expected {self.modulus.d} amplitudes, got {amps.shape[0]}"
            )
        if self.modulus.d > MAX_DIMENSION:
            raise ConfigError(f"d={self.modulus.d} exceeds statevector cap {MAX_DIMENSION}")
        amps.setflags(write=False)
        object.__setattr__(self, "amplitudes", amps)

    @property
    def d(self) -> int:
        return self.modulus.d

    @classmethod
    def basis(cls, index: IntLike, modulus: PrimeModulus) -> "StateVector":
        amps = np.zeros(modulus.d, dtype=np.complex128)
        amps[_int(index) % modulus.d] = 1.0
        return cls(amps, modulus)

    @classmethod
    def random(cls, modulus: PrimeModulus, rng: np.random.Generator) -> "StateVector":
        amps = rng.normal(size=modulus.d) + 1j * rng.normal(size=modulus.d)
        return cls(amps / np.linalg.norm(amps), modulus)

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def is_normalized(self, tol: float = NORM_TOL) -> bool:
        return abs(self.norm() - 1.0) <= tol

    def probabilities(self) -> np.ndarray:
        return np.abs(self.amplitudes) ** 2

    def __len__(self) -> int:
        return self.d


class Basis(str, enum.Enum):
    FOURIER = "Fourier"
    COMPUTATIONAL = "Computational"


@dataclass(frozen=True)
class FourierOrbitState:
    basis_tag: Basis
    exponent: FieldElement
    phase_exp: FieldElement

    @classmethod
    def fourier(cls, exponent: IntLike, modulus: PrimeModulus, phase_exp: IntLike = 0):
        return cls(Basis.FOURIER, modulus(_int(exponent)), modulus(_int(phase_exp)))

    @classmethod
    def computational(cls, index: IntLike, modulus: PrimeModulus, phase_exp: IntLike = 0):
        return cls(Basis.COMPUTATIONAL, modulus(_int(index)), modulus(_int(phase_exp)))

    @property
    def modulus(self) -> PrimeModulus:
        return self.exponent.modulus


def qft_apply(s: StateVector) -> StateVector:
    return StateVector(qft_matrix(s.d) @ s.amplitudes, s.modulus)


def iqft_apply(s: StateVector) -> StateVector:
    return StateVector(qft_matrix(s.d).conj().T @ s.amplitudes, s.modulus)


def pauli_apply(m: IntLike, n: IntLike, s: StateVector) -> StateVector:
    """Apply ``sum_k w^{nk} |k+m><k|``."""
    d = s.d
    k = np.arange(d)
    phased = s.amplitudes * omega_power(d, _int(n) * k)
    return StateVector(np.roll(phased, _int(m) % d), s.modulus)


def orbit_pauli_apply(m: IntLike, n: IntLike, s: FourierOrbitState) -> FourierOrbitState:
    if s.basis_tag is not Basis.FOURIER:
        raise WrongBasis("orbit Pauli update is only defined on Fourier-basis states")
    mod = s.modulus
    new_exp = s.exponent + _int(n)
    new_phase = s.phase_exp - mod(_int(m)) * new_exp
    return FourierOrbitState(Basis.FOURIER, new_exp, new_phase)


def orbit_to_vector(s: FourierOrbitState) -> StateVector:
    mod = s.modulus
    base = StateVector.basis(s.exponent, mod)
    if s.basis_tag is Basis.FOURIER:
        base = qft_apply(base)
    return StateVector(base.amplitudes * omega_power(mod.d, s.phase_exp.value), mod)


def vector_to_orbit(s: StateVector, tol: float = 1e-9) -> FourierOrbitState | None:
    """Recover the exact orbit form of ``s`` if it has one, else ``None``."""
    d = s.d
    amps = s.amplitudes
    probs = s.probabilities()
    j = int(np.argmax(probs))
    if abs(probs[j] - 1.0) <= tol:
        tag, index, lead = Basis.COMPUTATIONAL, j, amps[j]
    else:
        coeffs = iqft_apply(s).amplitudes
        j = int(np.argmax(np.abs(coeffs)))
        if abs(abs(coeffs[j]) ** 2 - 1.0) > tol:
            return None
        tag, index, lead = Basis.FOURIER, j, coeffs[j]
    phase = int(np.rint(np.angle(lead) * d / (2 * np.pi))) % d
    if abs(lead - roots_of_unity(d)[phase]) > 1e-6:
        return None
    return FourierOrbitState(tag, s.modulus(index), s.modulus(phase))


def measure_computational(s: StateVector, rng: np.random.Generator) -> FieldElement:
    if not s.is_normalized():
        raise NotNormalized(f"state norm {s.norm():.12f} is not 1")
    probs = s.probabilities()
    probs = probs / probs.sum()
    outcome = int(rng.choice(s.d, p=probs))
    return s.modulus(outcome)


def fidelity(a: StateVector, b: StateVector) -> float:
    if a.d != b.d:
        raise DimensionMismatch(f"cannot compare d={a.d} with d={b.d}")
    f = abs(np.vdot(a.amplitudes, b.amplitudes)) ** 2
    return float(min(1.0, f))


def shift_matrix(d: int, m: int = 1) -> np.ndarray:
    """``X^m`` as a dense matrix."""
    return np.roll(np.eye(d, dtype=np.complex128), m % d, axis=0)


def clock_matrix(d: int, n: int = 1) -> np.ndarray:
    """``Z^n`` as a dense matrix."""
    return np.diag(omega_power(d, n * np.arange(d)))


def pauli_matrix(d: int, m: int, n: int) -> np.ndarray:
    """``U_{m,n}`` built entry by entry from its definition."""
    u = np.zeros((d, d), dtype=np.complex128)
    for k in range(d):
        u[(k + m) % d, k] = roots_of_unity(d)[(n * k) % d]
    return u
