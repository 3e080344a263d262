"""End-to-end acceptance checks, one test per criterion.

Each test prints a single PASS/FAIL line (visible with ``pytest -s``)
recording the measured extremes next to the tolerance they were held to.
"""

import itertools
import math
import time
from functools import reduce

import numpy as np
from scipy.linalg import expm

from superschur import (
    KrausChannel,
    Lindbladian,
    Partition,
    QuditOperator,
    SuperOperatorMatrix,
    blockwise_exp,
    classify_kraus_symmetry,
    classify_lindblad_symmetry,
    decompose,
    dfs_report,
    example_channel,
    kraus_superop,
    lindblad_superop,
    operator_basis,
    orthogonalize_kraus,
    partitions,
    perm_rep,
    permutation_in_schur,
    protection_check,
    super_schur_basis,
    syt_dimension,
    weyl_dimension,
)
from superschur.cli import main
from superschur.permutations import adjacent_transpositions, string_index_map

TWO_ONE = Partition((2, 1))

DAMPING_FAMILIES = [
    ("collective_damping", "strong"),
    ("correlated_damping", "strong"),
    ("single_site_damping", "weak"),
    ("independent_damping", "weak"),
]
JUMP_FAMILIES = [
    ("single_jump", "weak"),
    ("double_jump", "weak"),
    ("collective_jump", "strong"),
]


def report(num, title, ok, detail):
    print(f"ACCEPTANCE {num} {title}: {'PASS' if ok else 'FAIL'} — {detail}")
    assert ok, f"criterion {num} ({title}): {detail}"


def classify(channel):
    if isinstance(channel, KrausChannel):
        return classify_kraus_symmetry(channel)
    return classify_lindblad_symmetry(channel)


def superop_for(channel, letters):
    if isinstance(channel, KrausChannel):
        return kraus_superop(channel, letters)
    return lindblad_superop(channel, letters)


def lopsided_channel(n, p=0.5):
    f0 = np.array([[1, 0], [0, math.sqrt(1 - p)]], dtype=np.complex128)
    f1 = np.array([[0, math.sqrt(p)], [0, 0]], dtype=np.complex128)
    eye = np.eye(2, dtype=np.complex128)
    mats = [
        reduce(np.kron, [f0] + [eye] * (n - 1)),
        reduce(np.kron, [f1] + [eye] * (n - 1)),
    ]
    return KrausChannel(2, n, tuple(QuditOperator(2, n, m) for m in mats))


def test_criterion_1_decomposition_counts(capsys):
    t0 = time.perf_counter()
    code = main(["decompose", "--n", "3", "--d", "2"])
    elapsed = time.perf_counter() - t0
    out = capsys.readouterr().out
    rows = [line.split() for line in out.splitlines()]
    ok = (
        code == 0
        and ["{3}", "1", "20", "20"] in rows
        and ["{2,1}", "2", "20", "40"] in rows
        and ["{1,1,1}", "1", "4", "4"] in rows
        and "total 64 = (d^2)^n = 64" in out
        and "sectors: 3" in out
        and "p_1(3)=1 p_2(3)=1 p_3(3)=1" in out
        and elapsed < 1.0
    )
    with capsys.disabled():
        report(
            1,
            "decomposition counts",
            ok,
            f"3 sectors (1,20) (2,20) (1,4), total 64, row counts 1/1/1, {elapsed:.3f} s (< 1 s)",
        )


def test_criterion_2_reference_basis_vector(schur_2_3):
    target = np.zeros(64)
    target[int("112", 4)] = math.sqrt(2 / 3)
    target[int("121", 4)] = -math.sqrt(1 / 6)
    target[int("211", 4)] = -math.sqrt(1 / 6)
    deviations = []
    for col, lab in enumerate(schur_2_3.labels):
        if lab.shape == TWO_ONE and lab.weight == (0, 2, 1, 0):
            v = schur_2_3.unitary[:, col]
            deviations.append(
                min(np.max(np.abs(v - target)), np.max(np.abs(v + target)))
            )
    best = min(deviations) if deviations else np.inf
    ok = len(deviations) == 2 and best < 1e-10
    report(
        2,
        "reference basis vector",
        ok,
        f"weight-(0,2,1,0) column in a {{2,1}} tableau sector matches up to sign, "
        f"max deviation {best:.3e} (tol 1e-10)",
    )


def test_criterion_3_unitarity_and_equivariance(schur_2_2, schur_2_3, schur_3_2):
    worst_unitary = 0.0
    worst_equivariance = 0.0
    cases = [
        super_schur_basis(2, 1),
        schur_2_2,
        schur_2_3,
        schur_3_2,
    ]
    t0 = time.perf_counter()
    basis_n4 = super_schur_basis(2, 4)
    for g in adjacent_transpositions(4):
        worst_equivariance = max(
            worst_equivariance, permutation_in_schur(g, basis_n4).leakage
        )
    n4_elapsed = time.perf_counter() - t0
    cases.append(basis_n4)
    for basis in cases:
        worst_unitary = max(worst_unitary, basis.unitarity_deviation())
        for g in adjacent_transpositions(basis.n):
            block = permutation_in_schur(g, basis)
            worst_equivariance = max(worst_equivariance, block.leakage)
            for shape in basis.shapes:
                sl = basis.sector_slice(shape)
                want = np.kron(block.irrep_blocks[shape], np.eye(block.multiplicities[shape]))
                worst_equivariance = max(
                    worst_equivariance,
                    float(np.max(np.abs(block.matrix[sl, sl] - want))),
                )
    ok = worst_unitary < 1e-10 and worst_equivariance < 1e-10 and n4_elapsed < 60.0
    report(
        3,
        "unitarity and equivariance",
        ok,
        f"d=2 n<=4 and d=3 n=2: unitarity {worst_unitary:.3e}, block pattern "
        f"{worst_equivariance:.3e} (tol 1e-10), n=4 build+check {n4_elapsed:.1f} s (< 60 s)",
    )


def test_criterion_4_classification_table():
    mistakes = []
    worst_residual = 0.0

    def residuals_ok(cert, expected):
        nonlocal worst_residual
        checked = [cert.residuals.get("hamiltonian_invariance", 0.0)]
        if expected == "strong":
            checked.append(cert.residuals["strong_commutator"])
        else:
            checked.append(cert.residuals["expansion_residual"])
            checked.append(cert.residuals["unitarity"])
        worst_residual = max(worst_residual, max(checked))
        return max(checked) < 1e-8

    for (name, expected), p in itertools.product(DAMPING_FAMILIES, (0.1, 0.5, 0.9)):
        cert = classify(example_channel(name, n=3, p=p))
        if cert.classification != expected or not residuals_ok(cert, expected):
            mistakes.append(f"{name}(p={p})->{cert.classification}")
    for (name, expected), rate in itertools.product(JUMP_FAMILIES, (0.5, 1.0)):
        if name == "single_jump":
            params = {"gamma1": rate}
        elif name == "double_jump":
            params = {"gamma2": rate}
        else:
            params = {"gamma3": rate, "gamma4": rate, "gamma5": rate}
        cert = classify(example_channel(name, n=3, **params))
        if cert.classification != expected or not residuals_ok(cert, expected):
            mistakes.append(f"{name}({rate})->{cert.classification}")
    ok = not mistakes
    report(
        4,
        "classification table",
        ok,
        f"6 families over p in {{0.1,0.5,0.9}} and rates in {{0.5,1.0}}, max "
        f"residual {worst_residual:.3e} (tol 1e-8)"
        + (f"; mistakes: {mistakes}" if mistakes else ""),
    )


def test_criterion_5_block_structure_and_dfs(schur_2_3, letters_2_3):
    worst_leakage = 0.0
    worst_twin = 0.0
    failures = []
    families = [name for name, _ in DAMPING_FAMILIES + JUMP_FAMILIES] + ["transverse_ising"]
    for name in families:
        ch = example_channel(name, n=3)
        decomp = decompose(superop_for(ch, letters_2_3), schur_2_3)
        worst_leakage = max(worst_leakage, decomp.leakage)
        worst_twin = max(worst_twin, decomp.twin_deviation[TWO_ONE])
        rep = dfs_report(decomp, classify(ch))
        flags = {s.shape: (s.flagged, s.protected_dim) for s in rep.sectors}
        if flags[TWO_ONE] != (True, 2):
            failures.append(name)
        if decomp.leakage >= 1e-10 or decomp.twin_deviation[TWO_ONE] >= 1e-10:
            failures.append(name)
    ok = not failures
    report(
        5,
        "block structure and protected sector",
        ok,
        f"{len(families)} example channels at n=3: leakage {worst_leakage:.3e}, "
        f"{{2,1}} twin deviation {worst_twin:.3e} (tol 1e-10), {{2,1}} flagged with "
        f"protected dim 2" + (f"; failures: {failures}" if failures else ""),
    )


def test_criterion_6_kraus_closure():
    worst = 0.0
    for name in ("collective_damping", "correlated_damping"):
        for p in (0.1, 0.5, 0.9):
            worst = max(worst, example_channel(name, n=3, p=p).closure_deviation)
    ok = worst < 1e-12
    report(
        6,
        "Kraus closure with completion",
        ok,
        f"both completion-based sets at p in {{0.1,0.5,0.9}}: max closure "
        f"deviation {worst:.3e} (tol 1e-12)",
    )


def test_criterion_7_blockwise_exponential(schur_2_3, letters_2_3):
    t0 = time.perf_counter()
    lind = example_channel("single_jump", n=3, gamma1=1.0, h_x=1.0, J=1.0)
    G = lindblad_superop(lind, letters_2_3)
    decomp = decompose(G, schur_2_3)
    U = schur_2_3.unitary
    worst = 0.0
    for t in (0.1, 1.0):
        evolved = blockwise_exp(decomp, t)
        dense = expm(t * G.matrix)
        back = U @ evolved.schur_matrix @ U.conj().T
        worst = max(worst, float(np.max(np.abs(back - dense))))
    elapsed = time.perf_counter() - t0
    ok = worst < 1e-8 and elapsed < 10.0
    report(
        7,
        "blockwise exponential vs dense",
        ok,
        f"weak Lindblad generator at t in {{0.1,1.0}}: max deviation {worst:.3e} "
        f"(tol 1e-8), {elapsed:.2f} s (< 10 s)",
    )


def random_weak_channel(n, rng):
    """All n-fold products of one random Kraus pair, orthogonalized: the
    product set is closed under site permutations, hence weakly symmetric."""
    A = rng.standard_normal((4, 2)) + 1j * rng.standard_normal((4, 2))
    Q = np.linalg.qr(A)[0]
    k0, k1 = Q[:2, :], Q[2:, :]
    mats = [
        reduce(np.kron, choice)
        for choice in itertools.product((k0, k1), repeat=n)
    ]
    mats = orthogonalize_kraus(2, n, mats)
    return KrausChannel(2, n, tuple(QuditOperator(2, n, m) for m in mats))


def random_asymmetric_channel(n, rng):
    dim = 2**n
    A = rng.standard_normal((2 * dim, dim)) + 1j * rng.standard_normal((2 * dim, dim))
    Q = np.linalg.qr(A)[0]
    mats = orthogonalize_kraus(2, n, [Q[:dim, :], Q[dim:, :]])
    return KrausChannel(2, n, tuple(QuditOperator(2, n, m) for m in mats))


def test_criterion_8_property_suite(schur_2_2, schur_2_3, letters_2_2, letters_2_3):
    # (a) sector dimensions tile the space exactly
    dim_ok = True
    for d, n in itertools.product((2, 3), range(1, 7)):
        q = d * d
        total = sum(
            syt_dimension(s) * weyl_dimension(s, q) for s in partitions(n, min(n, q))
        )
        dim_ok = dim_ok and total == q**n

    # (b) two-site sector sizes against the (anti)symmetrizer oracle
    swap = string_index_map((1, 0), 4, 2)
    S = np.zeros((16, 16))
    S[swap, np.arange(16)] = 1.0
    oracle = (
        int(np.linalg.matrix_rank((np.eye(16) + S) / 2)),
        int(np.linalg.matrix_rank((np.eye(16) - S) / 2)),
    )
    sizes = (
        schur_2_2.multiplicity(Partition((2,))),
        schur_2_2.multiplicity(Partition((1, 1))),
    )
    size_ok = oracle == sizes == (10, 6)

    # (c) leakage and superoperator commutation agree as predicates
    rng = np.random.default_rng(20240817)
    agree = True
    contexts = {
        2: (schur_2_2, letters_2_2),
        3: (schur_2_3, letters_2_3),
    }
    checked = 0
    for n in (2, 3):
        basis, letters = contexts[n]
        shuffles = [
            perm_rep(g, 2, n, letters).liouville_matrix
            for g in adjacent_transpositions(n)
        ]
        channels = [random_weak_channel(n, rng) for _ in range(10)]
        channels += [random_asymmetric_channel(n, rng) for _ in range(2)]
        channels.append(lopsided_channel(n))
        for ch in channels:
            M = kraus_superop(ch, letters).matrix
            commutator = max(
                float(np.max(np.abs(M @ L - L @ M))) for L in shuffles
            )
            leakage = decompose(kraus_superop(ch, letters), basis).leakage
            agree = agree and ((leakage < 1e-10) == (commutator < 1e-10))
            checked += 1

    # (d) protection probe: clean on symmetric maps, loud on a perturbed one
    protection_ok = True
    worst_protection = 0.0
    for name, _ in DAMPING_FAMILIES + JUMP_FAMILIES:
        ch = example_channel(name, n=3)
        decomp = decompose(superop_for(ch, letters_2_3), schur_2_3)
        value = protection_check(decomp)
        worst_protection = max(worst_protection, value)
        protection_ok = protection_ok and value < 1e-10
    S_sym = kraus_superop(example_channel("collective_damping", n=3), letters_2_3)
    S_lop = kraus_superop(lopsided_channel(3), letters_2_3)
    mixed = SuperOperatorMatrix(
        2, 3, "channel", 0.95 * S_sym.matrix + 0.05 * S_lop.matrix, letters_2_3
    )
    perturbed = protection_check(decompose(mixed, schur_2_3))
    protection_ok = protection_ok and perturbed > 1e-3

    ok = dim_ok and size_ok and agree and protection_ok
    report(
        8,
        "property and oracle suite",
        ok,
        f"(a) dimension sums exact for n<=6, d<=3: {dim_ok}; (b) n=2 sizes "
        f"{sizes} = oracle {oracle}; (c) leakage/commutator predicates agree on "
        f"{checked} channels: {agree}; (d) protection {worst_protection:.3e} "
        f"symmetric (tol 1e-10) vs {perturbed:.3e} perturbed (> 1e-3)",
    )
