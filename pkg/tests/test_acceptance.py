"""Acceptance criteria, one test per criterion; each prints a single PASS/FAIL line."""
import math
import time

import numpy as np

from qdeform.cli import main
from qdeform.dsl import (
    MEASURED, DslError, bind_representation, parse_presentation, render_presentation,
)
from qdeform.exotic import (
    PRESETS, MomentumUndefined, build_representation, check_taylor_consistency, evaluate_preset, load_preset,
    make_params, momentum_singular_levels, position_momentum_action, remainder_bound,
)
from qdeform.exotic.evaluation import bind_run
from qdeform.fock import (
    OperatorMatrix, StructureFunctionSpec, klein_operator, ladder_operators, make_fock_space, masked_residual,
    number_operator, projector, q_bracket, structure_function_operator,
)

import dsl_gen
import oracles
from test_dsl import _fuzz_inputs


def fro(a):
    return float(np.linalg.norm(a))


def test_criterion_01_projectors(criterion):
    t0 = time.perf_counter()
    worst = 0.0
    for d in (16, 64, 256):
        for lam in (1, 2, 3, 4, 8, 16):
            b = make_fock_space(d, lam)
            n = number_operator(b)
            ps = [projector(b, mu) for mu in range(lam)]
            worst = max(worst, fro(sum(p.data for p in ps) - np.eye(d)))
            for mu, pm in enumerate(ps):
                worst = max(worst, fro(q_bracket(n, pm, 1).data))
                for nu, pn in enumerate(ps):
                    worst = max(worst, fro((pm @ pn).data - (pn.data if mu == nu else 0)))
    elapsed = time.perf_counter() - t0
    criterion(1, worst <= 1e-12 and elapsed < 5, f"projector suite max residual {worst:.2e}, {elapsed:.2f} s")


def _valid_alphas(rng, lam):
    while True:
        head = rng.uniform(-0.95, 3.0, lam - 1)
        alphas = (*head, -head.sum())
        if all(sum(alphas[:m]) > -1 for m in range(1, lam)):
            return alphas


def test_criterion_02_gdoa_ladder(criterion):
    rng = np.random.default_rng(2024)
    d = 64
    worst = 0.0
    for lam in (2, 3, 4):
        b = make_fock_space(d, lam)
        for _ in range(20):
            alphas = _valid_alphas(rng, lam)
            spec = StructureFunctionSpec(alphas)
            lo, hi = ladder_operators(b, spec)
            f = structure_function_operator(b, spec).data
            f_next = np.diag(oracles.structure_values(d + 1, alphas)[1:]).astype(complex)
            worst = max(worst, masked_residual((hi @ lo).data - f, 0, basis=b).masked_norm)
            worst = max(worst, masked_residual((lo @ hi).data - f_next, 1, basis=b).masked_norm)
            for mu in range(lam):
                shifted = projector(b, (mu + 1) % lam)
                worst = max(worst, fro((hi @ projector(b, mu) - shifted @ hi).data))
    criterion(2, worst <= 1e-12, f"GDOA ladder suite (60 alpha vectors) max residual {worst:.2e}")


def test_criterion_03_calogero_vasiliev(criterion):
    b = make_fock_space(64, 2)
    k = klein_operator(b)
    worst = 0.0
    for kappa in (-0.9, -0.5, 0.0, 0.5, 2.0):
        lo, hi = ladder_operators(b, StructureFunctionSpec.calogero_vasiliev(kappa))
        r1 = q_bracket(lo, hi, 1) - (b.identity() + k * kappa)
        worst = max(worst, masked_residual(r1, 1).masked_norm, masked_residual(q_bracket(k, hi, -1), 0).masked_norm)
    criterion(3, worst < 1e-12, f"Calogero-Vasiliev relations max residual {worst:.2e}")


def test_criterion_04_bosonic_limit(criterion):
    worst = 0.0
    count = 0
    for name in ("case1", "case2"):
        rep = evaluate_preset(name, make_params(0.0, lam=4), 32, measure=())
        worst = max([worst] + [r.masked_norm for r in rep])
        count += len(rep.records)
    criterion(4, worst < 1e-12, f"case1 + case2 at nu=0 ({count} relations) max masked residual {worst:.2e}")


def test_criterion_05_fermionic_limits(criterion):
    failures = []
    worst = 0.0
    for name in ("fermionic_c1", "fermionic_c2"):
        rep = evaluate_preset(name, make_params(1.0, lam=4), 32, tolerance=1e-10, measure=())
        worst = max([worst] + [r.masked_norm for r in rep])
        failures += [f"{name}:{r.label}={r.masked_norm:.2e}" for r in rep if not r.passed]
    # lambda = 2: the {b-, b+} right-hand side of the first limit must vanish
    rep2 = build_representation(8, make_params(1.0, lam=2), modes=2)
    p = load_preset("fermionic_c1")
    rhs = bind_run(p, rep2, run_params=False).evaluate_matrix(p.relation("bmbp_11").rhs)
    kdiag = np.diag(rep2.bindings["K1"].data)
    direct = 0.5 * (np.exp(-1j * np.pi * kdiag) - np.exp(1j * np.pi * kdiag))
    spectral = max(fro(rhs), float(np.linalg.norm(direct)))
    ok = not failures and spectral <= 1e-12
    detail = f"limit deviations max {worst:.2e}; lambda=2 spectral rhs {spectral:.2e}"
    if failures:
        detail += "; failing: " + ", ".join(failures)
    criterion(5, ok, detail)


def test_criterion_06_taylor_blocks(criterion):
    d = 32
    rows = []
    for lam in (4, 8):
        for nu in (0.05, 0.1, 0.2):
            rep = check_taylor_consistency(make_fock_space(d, lam), make_params(nu, lam=lam),
                                           StructureFunctionSpec.undeformed(lam))
            bound = math.sqrt(d) * remainder_bound(nu, lam)
            got = rep.record("block_form").masked_norm
            rows.append((lam, nu, got, bound))
    failing = [f"lam={lam} nu={nu}: {got:.2e} > {bound:.2e}" for lam, nu, got, bound in rows if got > bound]
    # the bound arithmetic itself, against the independent oracle
    arith = abs(remainder_bound(0.1, 8) - oracles.remainder_reference(0.1, 8)) <= 1e-22
    detail = f"block form within sqrt(D)*remainder for {len(rows) - len(failing)}/{len(rows)} points"
    detail += f"; remainder(0.1, 8) = {remainder_bound(0.1, 8):.3e}"
    if failing:
        detail += "; exceeded: " + ", ".join(failing)
    criterion(6, not failing and arith, detail)


def test_criterion_07_scalar_identities(criterion):
    worst = 0.0
    for sign in (1, -1):
        for nu in np.linspace(0.0, 1.0, 101):
            p = make_params(nu, sign)
            worst = max(worst, abs(p.theta.conjugate() - p.theta / p.chi))
        for nu in (0.0, 1.0):
            worst = max(worst, abs(make_params(nu, sign).eta - 1))
    criterion(7, worst <= 1e-14, f"conj(theta) = theta/chi and eta(0) = eta(1) = 1, max error {worst:.1e}")


def test_criterion_08_parser_evaluator(criterion):
    rng = np.random.default_rng(88)
    round_trip = 0
    for name in PRESETS:
        p = load_preset(name)
        round_trip += parse_presentation(render_presentation(p)) == p
    for _ in range(100):
        p = parse_presentation(dsl_gen.presentation_text(rng, n_rel=3))
        round_trip += parse_presentation(render_presentation(p)) == p
    b = make_fock_space(4, 1)
    decl = "algebra e;\ngen a, b, c;\nparam s = 0;\nparam t = 0;\n"
    worst = 0.0
    for _ in range(200):
        mats = {g: rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4)) for g in dsl_gen.GENS}
        text, expected = dsl_gen.matrix(rng, 4, mats)
        p = parse_presentation(decl + f"rel r: {text} = 0;")
        bound = bind_representation(p, {g: OperatorMatrix(b, m) for g, m in mats.items()}, dsl_gen.PARAMS)
        got = bound.evaluate_matrix(p.relations[0].lhs)
        worst = max(worst, float(np.max(np.abs(got - expected)) / max(1.0, np.max(np.abs(expected)))))
    crashes = 0
    for src in _fuzz_inputs(10_000, seed=1):
        try:
            parse_presentation(src)
        except DslError:
            pass
        except Exception:  # anything else is a crash
            crashes += 1
    total = len(PRESETS) + 100
    ok = round_trip == total and worst <= 1e-12 and crashes == 0
    criterion(8, ok, f"round trip {round_trip}/{total}, evaluator error {worst:.1e}, fuzz crashes {crashes}/10000")


def test_criterion_09_momentum_domain(criterion):
    b = make_fock_space(8, 4)
    levels = momentum_singular_levels(b)
    _, p = position_momentum_action(make_fock_space(8, 2), make_params(0.2), StructureFunctionSpec.undeformed(2))
    ok = levels == frozenset({0, 2, 4, 6}) and isinstance(p, MomentumUndefined)
    criterion(9, ok, f"lambda=4 singular levels {sorted(levels)}; lambda=2 momentum: {type(p).__name__}")


def test_criterion_10_cross_mode_and_sweep(criterion, tmp_path):
    rep = evaluate_preset("case1", make_params(0.3, lam=4), 8, measure_only=True)
    rec = rep.record("xx_12")
    honest = rec.masked_norm > 1e-6 and rec.status == MEASURED and rep.overall_pass
    out = tmp_path / "sweep.csv"
    t0 = time.perf_counter()
    code = main(["sweep", "--preset", "case1", "--nu", "0:1:0.05", "--dim", "16", "--lambda", "4",
                 "--measure-only", "--out", str(out)])
    elapsed = time.perf_counter() - t0
    rows = out.read_text().strip().splitlines()
    ok = honest and code == 0 and len(rows) == 1 + 21 * 24 and elapsed < 30
    criterion(10, ok, f"xx_12 at nu=0.3 measured ({rec.masked_norm:.2e}); 21-point sweep exit {code}, "
                      f"{len(rows) - 1} rows in {elapsed:.1f} s")
