"""Kraus channels, Lindblad generators, and permutation-symmetry certificates.

A channel is *strongly* symmetric when every Kraus operator commutes with
every site permutation, and *weakly* symmetric when permuting the sites
merely mixes the Kraus operators by a unitary matrix.  Both notions are
decided on the adjacent transpositions, which generate the full group.
Lindblad generators additionally require a permutation-invariant
Hamiltonian for either classification.
"""

from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass
from functools import reduce

import numpy as np

from .errors import ChannelInvariantError, ChannelSpecError, DimensionMismatchError
from .liouville import (
    OperatorBasis,
    QuditOperator,
    hilbert_permutation_matrix,
    vectorize,
)
from .permutations import adjacent_transpositions

CLOSURE_TOL = 1e-10
ORTHOGONALITY_TOL = 1e-10
HERMITICITY_TOL = 1e-12
TRACELESS_TOL = 1e-10
STRONG_TOL = 1e-10
WEAK_TOL = 1e-8
_NEGLIGIBLE_NORM_SQ = 1e-14


def _as_operators(d: int, n: int, matrices) -> tuple[QuditOperator, ...]:
    ops = []
    for m in matrices:
        op = m if isinstance(m, QuditOperator) else QuditOperator(d, n, m)
        if (op.d, op.n) != (d, n):
            raise DimensionMismatchError(
                f"operator (d={op.d}, n={op.n}) does not match channel (d={d}, n={n})"
            )
        ops.append(op)
    return tuple(ops)


def _gram(ops: tuple[QuditOperator, ...]) -> np.ndarray:
    stack = np.stack([op.matrix.reshape(-1) for op in ops])
    return np.conj(stack) @ stack.T / ops[0].d ** ops[0].n


@dataclass(frozen=True)
class KrausChannel:
    """A completely positive trace-preserving map in canonical Kraus form.

    The operators must close to the identity and be mutually orthogonal
    under the normalized trace pairing (every orthogonal Kraus set
    diagonalizes the process matrix, so this is a choice of canonical
    representative, not a restriction -- see orthogonalize_kraus).
    """

    d: int
    n: int
    kraus_ops: tuple[QuditOperator, ...]

    def __post_init__(self) -> None:
        ops = _as_operators(self.d, self.n, self.kraus_ops)
        if not ops:
            raise ChannelInvariantError("channel needs at least one Kraus operator")
        object.__setattr__(self, "kraus_ops", ops)
        dim = self.d**self.n
        closure = sum(op.matrix.conj().T @ op.matrix for op in ops)
        dev = float(np.max(np.abs(closure - np.eye(dim))))
        if dev > CLOSURE_TOL:
            raise ChannelInvariantError(
                f"Kraus closure violated: max deviation {dev:.3e} > {CLOSURE_TOL}"
            )
        G = _gram(ops)
        if any(G[i, i].real < _NEGLIGIBLE_NORM_SQ for i in range(len(ops))):
            raise ChannelInvariantError("channel contains a zero Kraus operator")
        off = np.max(np.abs(G - np.diag(np.diag(G)))) if len(ops) > 1 else 0.0
        if off > ORTHOGONALITY_TOL:
            raise ChannelInvariantError(
                f"Kraus operators not mutually orthogonal: max overlap {off:.3e}; "
                "run orthogonalize_kraus first"
            )

    @property
    def closure_deviation(self) -> float:
        dim = self.d**self.n
        closure = sum(op.matrix.conj().T @ op.matrix for op in self.kraus_ops)
        return float(np.max(np.abs(closure - np.eye(dim))))


@dataclass(frozen=True)
class Lindbladian:
    """A Markovian generator: Hermitian Hamiltonian plus jump operators.

    Jump operators are kept traceless and mutually orthogonal, the
    standard gauge in which the generator's decomposition is unique.
    """

    d: int
    n: int
    hamiltonian: QuditOperator
    jump_ops: tuple[QuditOperator, ...]

    def __post_init__(self) -> None:
        ham = self.hamiltonian
        if not isinstance(ham, QuditOperator):
            ham = QuditOperator(self.d, self.n, ham)
            object.__setattr__(self, "hamiltonian", ham)
        if (ham.d, ham.n) != (self.d, self.n):
            raise DimensionMismatchError("Hamiltonian does not match (d, n)")
        herm = float(np.max(np.abs(ham.matrix - ham.matrix.conj().T)))
        if herm > HERMITICITY_TOL:
            raise ChannelInvariantError(f"Hamiltonian not Hermitian: {herm:.3e}")
        ops = _as_operators(self.d, self.n, self.jump_ops)
        object.__setattr__(self, "jump_ops", ops)
        for k, op in enumerate(ops):
            tr = abs(np.trace(op.matrix)) / self.d**self.n
            if tr > TRACELESS_TOL:
                raise ChannelInvariantError(f"jump operator {k} not traceless: {tr:.3e}")
        if ops:
            G = _gram(ops)
            if any(G[i, i].real < _NEGLIGIBLE_NORM_SQ for i in range(len(ops))):
                raise ChannelInvariantError("zero jump operator")
            if len(ops) > 1:
                off = float(np.max(np.abs(G - np.diag(np.diag(G)))))
                if off > ORTHOGONALITY_TOL:
                    raise ChannelInvariantError(
                        f"jump operators not mutually orthogonal: max overlap {off:.3e}"
                    )


def orthogonalize_kraus(d: int, n: int, matrices) -> list[np.ndarray]:
    """Rotate a Kraus list into canonical mutually orthogonal form.

    Diagonalizing the Gram matrix of the operators recombines them by a
    unitary, which never changes the channel; the output operators are
    eigenvectors of the process matrix, ordered by decreasing weight.
    Near-zero operators are dropped.  Lists that are already orthogonal
    are returned unchanged (up to dropping zeros).
    """
    ops = [np.asarray(m, dtype=np.complex128) for m in matrices]
    if not ops:
        return []
    stack = np.stack([m.reshape(-1) for m in ops])
    G = np.conj(stack) @ stack.T / d**n
    diag = np.diag(G).real
    off = np.max(np.abs(G - np.diag(diag))) if len(ops) > 1 else 0.0
    if off <= 1e-12 * max(1.0, diag.max(initial=0.0)):
        return [m for m, w in zip(ops, diag) if w > _NEGLIGIBLE_NORM_SQ]
    w, W = np.linalg.eigh(G)
    out = []
    for a in reversed(range(len(ops))):  # largest weight first
        if w[a] <= _NEGLIGIBLE_NORM_SQ:
            continue
        out.append(np.tensordot(W[:, a], np.stack(ops), axes=(0, 0)))
    return out


def psd_sqrt(matrix: np.ndarray, tol: float = 1e-12) -> np.ndarray:
    """Hermitian square root of a positive semidefinite matrix.

    Eigenvalues below -tol raise; small negative roundoff is clamped.
    """
    m = np.asarray(matrix, dtype=np.complex128)
    herm = float(np.max(np.abs(m - m.conj().T)))
    if herm > 1e-10:
        raise ChannelInvariantError(f"matrix not Hermitian: deviation {herm:.3e}")
    w, V = np.linalg.eigh(m)
    if w.min(initial=0.0) < -tol:
        raise ChannelInvariantError(f"matrix not positive semidefinite: min eigenvalue {w.min():.3e}")
    w = np.clip(w, 0.0, None)
    return (V * np.sqrt(w)) @ V.conj().T


def symmetrize_local_kraus(
    single_ops: dict, pattern, d: int | None = None
) -> list[QuditOperator]:
    """Tensor products of labelled single-site operators over every
    distinct ordering of ``pattern``, in lexicographic label order."""
    pattern = tuple(pattern)
    if not pattern:
        raise ValueError("pattern must name at least one site")
    mats = {}
    for label in set(pattern):
        if label not in single_ops:
            raise ValueError(f"pattern label {label!r} missing from single_ops")
        m = np.asarray(single_ops[label], dtype=np.complex128)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise DimensionMismatchError(f"operator {label!r} is not square")
        mats[label] = m
    sizes = {m.shape[0] for m in mats.values()}
    if len(sizes) != 1:
        raise DimensionMismatchError(f"inconsistent single-site dimensions: {sorted(sizes)}")
    dd = sizes.pop()
    if d is not None and d != dd:
        raise DimensionMismatchError(f"expected local dimension {d}, operators are {dd}x{dd}")
    n = len(pattern)
    out = []
    for ordering in sorted(set(itertools.permutations(pattern))):
        out.append(QuditOperator(dd, n, reduce(np.kron, (mats[x] for x in ordering))))
    return out


@dataclass(frozen=True)
class SymmetryCertificate:
    """Outcome of the permutation-symmetry test on the group generators.

    ``generator_unitaries`` maps each adjacent transposition to the mixing
    matrix solved from operator overlaps; for a strongly symmetric channel
    these are close to the identity.  ``residuals`` records the measured
    deviations behind the classification.
    """

    classification: str
    generator_unitaries: dict
    residuals: dict

    def __post_init__(self) -> None:
        if self.classification not in ("strong", "weak", "none"):
            raise ValueError(f"unknown classification {self.classification!r}")


def mixing_unitary(
    ops: tuple[QuditOperator, ...], pi: tuple[int, ...], d: int, n: int
) -> tuple[np.ndarray, float, float]:
    """Solve pi F_nu pi^dag = sum_mu F_mu U[mu, nu] by overlaps.

    Returns (U, expansion residual, unitarity deviation).  The residual is
    the largest entry of the unexplained remainder; it vanishes exactly
    when the permuted operators stay inside the original span.
    """
    P = hilbert_permutation_matrix(pi, d, n)
    mats = [op.matrix for op in ops]
    norms2 = [np.vdot(F, F).real for F in mats]
    k = len(mats)
    U = np.empty((k, k), dtype=np.complex128)
    residual = 0.0
    for nu, F in enumerate(mats):
        Ft = P @ F @ P.T
        for mu, G in enumerate(mats):
            U[mu, nu] = np.vdot(G, Ft) / norms2[mu]
        recon = sum(U[mu, nu] * mats[mu] for mu in range(k))
        residual = max(residual, float(np.max(np.abs(Ft - recon))))
    unit_dev = float(np.max(np.abs(U.conj().T @ U - np.eye(k))))
    return U, residual, unit_dev


def _generator_symmetry(
    ops: tuple[QuditOperator, ...], d: int, n: int
) -> tuple[dict, float, float, float]:
    gens = adjacent_transpositions(n)
    commutator = 0.0
    expansion = 0.0
    unitarity = 0.0
    unitaries = {}
    for g in gens:
        P = hilbert_permutation_matrix(g, d, n)
        for op in ops:
            commutator = max(
                commutator, float(np.max(np.abs(op.matrix @ P - P @ op.matrix)))
            )
        if ops:
            U, res, udev = mixing_unitary(ops, g, d, n)
        else:
            U, res, udev = np.eye(0, dtype=np.complex128), 0.0, 0.0
        unitaries[g] = U
        expansion = max(expansion, res)
        unitarity = max(unitarity, udev)
    return unitaries, commutator, expansion, unitarity


def classify_kraus_symmetry(channel: KrausChannel) -> SymmetryCertificate:
    """Strong/weak/none certificate for a Kraus channel."""
    unitaries, comm, expansion, unitarity = _generator_symmetry(
        channel.kraus_ops, channel.d, channel.n
    )
    residuals = {
        "strong_commutator": comm,
        "expansion_residual": expansion,
        "unitarity": unitarity,
    }
    if comm < STRONG_TOL:
        classification = "strong"
    elif expansion < WEAK_TOL and unitarity < WEAK_TOL:
        classification = "weak"
    else:
        classification = "none"
    return SymmetryCertificate(classification, unitaries, residuals)


def classify_lindblad_symmetry(lind: Lindbladian) -> SymmetryCertificate:
    """Strong/weak/none certificate for a Lindblad generator.

    Either classification requires the Hamiltonian itself to be
    permutation invariant; the jump operators then decide strong vs weak
    exactly as Kraus operators do.
    """
    ham_dev = 0.0
    H = lind.hamiltonian.matrix
    for g in adjacent_transpositions(lind.n):
        P = hilbert_permutation_matrix(g, lind.d, lind.n)
        ham_dev = max(ham_dev, float(np.max(np.abs(P @ H @ P.T - H))))
    unitaries, comm, expansion, unitarity = _generator_symmetry(
        lind.jump_ops, lind.d, lind.n
    )
    residuals = {
        "hamiltonian_invariance": ham_dev,
        "strong_commutator": comm,
        "expansion_residual": expansion,
        "unitarity": unitarity,
    }
    if ham_dev >= STRONG_TOL:
        classification = "none"
    elif comm < STRONG_TOL:
        classification = "strong"
    elif expansion < WEAK_TOL and unitarity < WEAK_TOL:
        classification = "weak"
    else:
        classification = "none"
    return SymmetryCertificate(classification, unitaries, residuals)


@dataclass(frozen=True)
class SuperOperatorMatrix:
    """A superoperator as a dense matrix on letter-string coordinates."""

    d: int
    n: int
    kind: str  # "channel" or "generator"
    matrix: np.ndarray
    basis: OperatorBasis

    def __post_init__(self) -> None:
        if self.kind not in ("channel", "generator"):
            raise ValueError(f"kind must be 'channel' or 'generator', got {self.kind!r}")
        dim = (self.d * self.d) ** self.n
        m = np.asarray(self.matrix, dtype=np.complex128)
        if m.shape != (dim, dim):
            raise DimensionMismatchError(f"matrix shape {m.shape} != ({dim}, {dim})")
        object.__setattr__(self, "matrix", m)


def _check_channel_basis(obj, basis: OperatorBasis) -> None:
    if (obj.d, obj.n) != (basis.d, basis.n):
        raise DimensionMismatchError(
            f"channel (d={obj.d}, n={obj.n}) does not match basis (d={basis.d}, n={basis.n})"
        )


def kraus_superop(channel: KrausChannel, basis: OperatorBasis) -> SuperOperatorMatrix:
    """Matrix of rho -> sum_mu F_mu rho F_mu^dag in the letter basis."""
    _check_channel_basis(channel, basis)
    dim = basis.dim
    mats = [op.matrix for op in channel.kraus_ops]
    out = np.empty((dim, dim), dtype=np.complex128)
    for a in range(dim):
        B = basis.element_matrix(a)
        image = sum(F @ B @ F.conj().T for F in mats)
        out[:, a] = vectorize(QuditOperator(basis.d, basis.n, image), basis)
    return SuperOperatorMatrix(d=basis.d, n=basis.n, kind="channel", matrix=out, basis=basis)


def lindblad_superop(lind: Lindbladian, basis: OperatorBasis) -> SuperOperatorMatrix:
    """Matrix of the generator rho -> -i[H, rho] + sum_k D[L_k](rho)."""
    _check_channel_basis(lind, basis)
    dim = basis.dim
    H = lind.hamiltonian.matrix
    jumps = [op.matrix for op in lind.jump_ops]
    sinks = [L.conj().T @ L for L in jumps]
    out = np.empty((dim, dim), dtype=np.complex128)
    for a in range(dim):
        B = basis.element_matrix(a)
        image = -1j * (H @ B - B @ H)
        for L, K in zip(jumps, sinks):
            image += L @ B @ L.conj().T - 0.5 * (K @ B + B @ K)
        out[:, a] = vectorize(QuditOperator(basis.d, basis.n, image), basis)
    return SuperOperatorMatrix(d=basis.d, n=basis.n, kind="generator", matrix=out, basis=basis)


# --------------------------------------------------------------------------
# Example families


def _damping_pair(p: float) -> tuple[np.ndarray, np.ndarray]:
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"decay probability must lie in [0, 1], got {p}")
    f0 = np.array([[1.0, 0.0], [0.0, math.sqrt(1.0 - p)]], dtype=np.complex128)
    f1 = np.array([[0.0, math.sqrt(p)], [0.0, 0.0]], dtype=np.complex128)
    return f0, f1


_LOWER = np.array([[0.0, 1.0], [0.0, 0.0]], dtype=np.complex128)


def _embed_site(op: np.ndarray, site: int, n: int) -> np.ndarray:
    eye = np.eye(2, dtype=np.complex128)
    return reduce(np.kron, (op if k == site else eye for k in range(n)))


def _pair_product(op: np.ndarray, i: int, j: int, n: int) -> np.ndarray:
    eye = np.eye(2, dtype=np.complex128)
    return reduce(np.kron, (op if k in (i, j) else eye for k in range(n)))


def _completion_op(ops: list[np.ndarray], dim: int) -> np.ndarray | None:
    """Kraus operator completing a contractive set to a channel, if needed."""
    R = np.eye(dim, dtype=np.complex128) - sum(F.conj().T @ F for F in ops)
    if np.max(np.abs(R)) < 1e-14:
        return None
    return psd_sqrt(R)


def _ising_hamiltonian(n: int, h_x: float, J: float) -> np.ndarray:
    """Transverse field plus uniform all-to-all longitudinal coupling
    (for three sites the all-to-all and nearest-neighbour rings agree)."""
    X = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=np.complex128)
    Z = np.array([[1.0, 0.0], [0.0, -1.0]], dtype=np.complex128)
    dim = 2**n
    H = np.zeros((dim, dim), dtype=np.complex128)
    for k in range(n):
        H += h_x * _embed_site(X, k, n)
    for i in range(n):
        for j in range(i + 1, n):
            Zi = _embed_site(Z, i, n)
            Zj = _embed_site(Z, j, n)
            H += J * (Zi @ Zj)
    return H


def _build_collective_damping(n: int, p: float = 0.5) -> KrausChannel:
    f0, f1 = _damping_pair(p)
    ops = [reduce(np.kron, [f0] * n), reduce(np.kron, [f1] * n)]
    tail = _completion_op(ops, 2**n)
    if tail is not None:
        ops.append(tail)
    return KrausChannel(2, n, tuple(orthogonalize_kraus(2, n, ops)))


def _build_correlated_damping(n: int, p: float = 0.5) -> KrausChannel:
    # Coherent sums over the permutation orbit of one (resp. two) damped
    # sites.  Each sum is scaled by 1/sqrt(orbit size): the raw sums
    # exceed contractivity for p > 2 - sqrt(3), while the scaled set is a
    # sub-sum of the full product closure and completes for every p.
    f0, f1 = _damping_pair(p)
    singles = symmetrize_local_kraus({"f0": f0, "f1": f1}, ["f1"] + ["f0"] * (n - 1))
    doubles = symmetrize_local_kraus({"f0": f0, "f1": f1}, ["f1", "f1"] + ["f0"] * (n - 2))
    ops = [
        sum(op.matrix for op in singles) / math.sqrt(len(singles)),
        sum(op.matrix for op in doubles) / math.sqrt(len(doubles)),
    ]
    tail = _completion_op(ops, 2**n)
    if tail is not None:
        ops.append(tail)
    return KrausChannel(2, n, tuple(orthogonalize_kraus(2, n, ops)))


def _build_single_site_damping(n: int, p: float = 0.5) -> KrausChannel:
    # One site damps at a time; the 1/sqrt(n) weight restores closure.
    f0, f1 = _damping_pair(p)
    eye = np.eye(2, dtype=np.complex128)
    ops = []
    for label in ("f0", "f1"):
        orbit = symmetrize_local_kraus(
            {"f0": f0, "f1": f1, "I": eye}, [label] + ["I"] * (n - 1)
        )
        ops.extend(op.matrix / math.sqrt(n) for op in orbit)
    return KrausChannel(2, n, tuple(orthogonalize_kraus(2, n, ops)))


def _build_independent_damping(n: int, p: float = 0.5) -> KrausChannel:
    # Every site damps independently: all 2**n products, the union of the
    # permutation orbits of the patterns f1^k f0^(n-k).
    f0, f1 = _damping_pair(p)
    ops = []
    for k in range(n + 1):
        orbit = symmetrize_local_kraus(
            {"f0": f0, "f1": f1}, ["f1"] * k + ["f0"] * (n - k)
        )
        ops.extend(op.matrix for op in orbit)
    return KrausChannel(2, n, tuple(orthogonalize_kraus(2, n, ops)))


def _build_single_jump(n: int, gamma1: float = 1.0, h_x: float = 1.0, J: float = 1.0) -> Lindbladian:
    _check_rate("gamma1", gamma1)
    jumps = [math.sqrt(gamma1) * _embed_site(_LOWER, k, n) for k in range(n)]
    return Lindbladian(2, n, QuditOperator(2, n, _ising_hamiltonian(n, h_x, J)), tuple(jumps))


def _build_double_jump(n: int, gamma2: float = 1.0, h_x: float = 1.0, J: float = 1.0) -> Lindbladian:
    _check_rate("gamma2", gamma2)
    jumps = [
        math.sqrt(gamma2) * _pair_product(_LOWER, i, j, n)
        for i in range(n)
        for j in range(i + 1, n)
    ]
    return Lindbladian(2, n, QuditOperator(2, n, _ising_hamiltonian(n, h_x, J)), tuple(jumps))


def _build_collective_jump(
    n: int,
    gamma3: float = 1.0,
    gamma4: float = 1.0,
    gamma5: float = 1.0,
    h_x: float = 1.0,
    J: float = 1.0,
) -> Lindbladian:
    for name, rate in (("gamma3", gamma3), ("gamma4", gamma4), ("gamma5", gamma5)):
        _check_rate(name, rate)
    jumps = []
    if gamma3 > 0.0:
        jumps.append(math.sqrt(gamma3) * sum(_embed_site(_LOWER, k, n) for k in range(n)))
    if gamma4 > 0.0:
        jumps.append(
            math.sqrt(gamma4)
            * sum(_pair_product(_LOWER, i, j, n) for i in range(n) for j in range(i + 1, n))
        )
    if gamma5 > 0.0:
        jumps.append(math.sqrt(gamma5) * reduce(np.kron, [_LOWER] * n))
    # at n = 2 the pair sum and the all-sites product coincide; the Gram
    # rotation merges parallel jumps without changing the dissipator
    jumps = orthogonalize_kraus(2, n, jumps)
    return Lindbladian(2, n, QuditOperator(2, n, _ising_hamiltonian(n, h_x, J)), tuple(jumps))


def _build_transverse_ising(n: int, h_x: float = 1.0, J: float = 1.0) -> Lindbladian:
    return Lindbladian(2, n, QuditOperator(2, n, _ising_hamiltonian(n, h_x, J)), ())


def _check_rate(name: str, rate: float) -> None:
    if rate < 0.0:
        raise ValueError(f"{name} must be non-negative, got {rate}")


EXAMPLE_CHANNELS = {
    "collective_damping": _build_collective_damping,
    "correlated_damping": _build_correlated_damping,
    "single_site_damping": _build_single_site_damping,
    "independent_damping": _build_independent_damping,
    "single_jump": _build_single_jump,
    "double_jump": _build_double_jump,
    "collective_jump": _build_collective_jump,
    "transverse_ising": _build_transverse_ising,
}


def example_channel(name: str, n: int = 3, **params):
    """Build one of the named qubit families (KrausChannel or Lindbladian).

    Damping families take ``p``; jump families take decay rates
    (``gamma1`` .. ``gamma5``) and Hamiltonian couplings ``h_x``, ``J``.
    """
    if name not in EXAMPLE_CHANNELS:
        known = ", ".join(sorted(EXAMPLE_CHANNELS))
        raise ValueError(f"unknown example channel {name!r}; known: {known}")
    if n < 2:
        raise ValueError(f"example channels need n >= 2, got {n}")
    try:
        return EXAMPLE_CHANNELS[name](n, **params)
    except TypeError as exc:
        raise ValueError(f"bad parameters for {name!r}: {exc}") from None


# --------------------------------------------------------------------------
# Channel description files


_TOP_KEYS = {"d", "n", "kind", "operators", "hamiltonian", "builder", "orthogonalize"}


def _require_int(doc: dict, key: str, minimum: int) -> int:
    if key not in doc:
        raise ChannelSpecError(f"{key}: required field missing")
    value = doc[key]
    if isinstance(value, bool) or not isinstance(value, int):
        raise ChannelSpecError(f"{key}: expected an integer, got {value!r}")
    if value < minimum:
        raise ChannelSpecError(f"{key}: must be >= {minimum}, got {value}")
    return value


def _parse_matrix(obj, where: str, dim: int) -> np.ndarray:
    if not isinstance(obj, list):
        raise ChannelSpecError(f"{where}: expected a list of {dim} rows")
    if len(obj) != dim:
        raise ChannelSpecError(f"{where}: expected {dim} rows, got {len(obj)}")
    out = np.empty((dim, dim), dtype=np.complex128)
    for r, row in enumerate(obj):
        if not isinstance(row, list) or len(row) != dim:
            raise ChannelSpecError(f"{where}[{r}]: expected a row of {dim} entries")
        for c, entry in enumerate(row):
            ok = (
                isinstance(entry, list)
                and len(entry) == 2
                and all(
                    isinstance(x, (int, float)) and not isinstance(x, bool) for x in entry
                )
            )
            if not ok:
                raise ChannelSpecError(f"{where}[{r}][{c}]: expected a [re, im] pair of numbers")
            out[r, c] = complex(entry[0], entry[1])
    return out


def channel_from_dict(doc):
    """Build a KrausChannel or Lindbladian from a parsed description.

    Accepted fields: ``d``, ``n``, ``kind`` ("kraus" | "lindblad"), and
    exactly one of ``operators`` (list of matrices, entries as [re, im]
    pairs) or ``builder`` ({"name", "params"} invoking example_channel).
    A Lindbladian may add ``hamiltonian``; ``orthogonalize: true`` runs
    the operator list through orthogonalize_kraus first.
    """
    if not isinstance(doc, dict):
        raise ChannelSpecError("top level: expected an object")
    for key in doc:
        if key not in _TOP_KEYS:
            raise ChannelSpecError(f"{key}: unknown field")
    d = _require_int(doc, "d", minimum=2)
    n = _require_int(doc, "n", minimum=1)
    kind = doc.get("kind")
    if kind not in ("kraus", "lindblad"):
        raise ChannelSpecError(f"kind: expected 'kraus' or 'lindblad', got {kind!r}")
    if ("operators" in doc) == ("builder" in doc):
        raise ChannelSpecError("exactly one of 'operators' or 'builder' is required")

    if "builder" in doc:
        for key in ("hamiltonian", "orthogonalize"):
            if key in doc:
                raise ChannelSpecError(f"{key}: not allowed together with builder")
        b = doc["builder"]
        if not isinstance(b, dict):
            raise ChannelSpecError("builder: expected an object")
        for key in b:
            if key not in ("name", "params"):
                raise ChannelSpecError(f"builder.{key}: unknown field")
        name = b.get("name")
        if not isinstance(name, str):
            raise ChannelSpecError(f"builder.name: expected a string, got {name!r}")
        params = b.get("params", {})
        if not isinstance(params, dict):
            raise ChannelSpecError("builder.params: expected an object")
        if d != 2:
            raise ChannelSpecError("builder: example families are qubit models; requires d = 2")
        try:
            built = example_channel(name, n=n, **params)
        except ValueError as exc:
            raise ChannelSpecError(f"builder: {exc}") from None
        built_kind = "kraus" if isinstance(built, KrausChannel) else "lindblad"
        if built_kind != kind:
            raise ChannelSpecError(
                f"kind: builder {name!r} produces a {built_kind} channel, not {kind}"
            )
        return built

    ortho = doc.get("orthogonalize", False)
    if not isinstance(ortho, bool):
        raise ChannelSpecError(f"orthogonalize: expected true or false, got {ortho!r}")
    dim = d**n
    raw = doc["operators"]
    if not isinstance(raw, list):
        raise ChannelSpecError("operators: expected a list of matrices")
    mats = [_parse_matrix(m, f"operators[{i}]", dim) for i, m in enumerate(raw)]
    if ortho:
        mats = orthogonalize_kraus(d, n, mats)
    if kind == "kraus":
        if "hamiltonian" in doc:
            raise ChannelSpecError("hamiltonian: only valid for kind 'lindblad'")
        return KrausChannel(d, n, tuple(QuditOperator(d, n, m) for m in mats))
    if "hamiltonian" in doc:
        H = _parse_matrix(doc["hamiltonian"], "hamiltonian", dim)
    else:
        H = np.zeros((dim, dim), dtype=np.complex128)
    return Lindbladian(
        d, n, QuditOperator(d, n, H), tuple(QuditOperator(d, n, m) for m in mats)
    )


def load_channel_spec(path):
    """Read a channel description file (JSON syntax) and build the channel."""
    try:
        with open(path, "r", encoding="utf-8") as fh:
            doc = json.load(fh)
    except OSError as exc:
        raise ChannelSpecError(f"cannot read {path}: {exc.strerror or exc}") from None
    except json.JSONDecodeError as exc:
        raise ChannelSpecError(f"{path}: not valid JSON: {exc}") from None
    return channel_from_dict(doc)
