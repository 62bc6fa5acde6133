"""Builders for the shipped ``.qdl`` preset sources.

Relations are written term by term for each index pair (i, j) in {1, 2}^2,
keeping only the delta_ij terms on the diagonal and the epsilon_ij terms off it.
The shipped files are the output of these builders (see scripts/generate_presets.py).
"""
from __future__ import annotations

from math import factorial

__all__ = [
    "PAIRS", "boson_source", "bosonic_source", "case1_source", "case2_source",
    "fermionic_c1_source", "fermionic_c2_source", "gdoa_source", "calogero_vasiliev_source",
    "deformed_clambda_source", "PRESET_BUILDERS",
]

PAIRS = ((1, 1), (1, 2), (2, 1), (2, 2))
TWO_MODE_GENS = ("bm1", "bm2", "bp1", "bp2")
PHASE_GENS = ("x1", "x2", "p1", "p2")


def _eps(i: int, j: int) -> int:
    return {(1, 2): 1, (2, 1): -1}.get((i, j), 0)


def _join(terms: list[tuple[int, str]]) -> str:
    """Signed terms -> expression text; the empty sum is 0."""
    if not terms:
        return "0"
    out = []
    for k, (sign, text) in enumerate(terms):
        if k == 0:
            out.append(text if sign > 0 else f"-{text}")
        else:
            out.append(f"{'+' if sign > 0 else '-'} {text}")
    return " ".join(out)


def _xi(i: int, inverse: bool = False, nu: str = "nu") -> str:
    return f"exp({'-' if inverse else ''}i*pi*{nu}*K{i})"


def _kpi(i: int, inverse: bool = False) -> str:
    return f"exp({'-' if inverse else ''}i*pi*K{i})"


def _header(name: str, gens, params) -> list[str]:
    lines = [f"algebra {name};", f"gen {', '.join(gens)};"]
    lines += [f"param {k} = {v};" for k, v in params]
    return lines


def _rel(label: str, lhs: str, rhs: str) -> str:
    return f"rel {label}: {lhs} = {rhs};"


def _finish(lines: list[str]) -> str:
    return "\n".join(lines) + "\n"


DEFORMATION_PARAMS = (("nu", "0"), ("chi", "1"), ("theta", "0"), ("eta", "1"), ("muw", "1"))


def boson_source() -> str:
    return _finish(_header("boson", ["a"], []) + [_rel("heis", "bracket(a, dagger(a), 1)", "I")])


def bosonic_source() -> str:
    lines = ["# two-mode bosonic limit"] + _header("bosonic", TWO_MODE_GENS, [])
    for i, j in PAIRS:
        lines.append(_rel(f"bmbp_{i}{j}", f"bracket(bm{i}, bp{j}, 1)", "I" if i == j else "0"))
    for i, j in PAIRS:
        lines.append(_rel(f"bpbp_{i}{j}", f"bracket(bp{i}, bp{j}, 1)", "0"))
    for i, j in PAIRS:
        lines.append(_rel(f"bmbm_{i}{j}", f"bracket(bm{i}, bm{j}, 1)", "0"))
    return _finish(lines)


def _phase_space_common(lines: list[str]):
    for i, j in PAIRS:
        e = _eps(i, j)
        lines.append(_rel(f"xx_{i}{j}", f"bracket(x{i}, x{j}, chi)", _join([(e, "i*theta*I")] if e else [])))
    for i, j in PAIRS:
        e = _eps(i, j)
        lines.append(_rel(f"pp_{i}{j}", f"bracket(p{i}, p{j}, chi)",
                          _join([(-e, "i*theta*muw*muw*I")] if e else [])))


def _eps_term(i: int, j: int, inner: str) -> list[tuple[int, str]]:
    e = _eps(i, j)
    return [(e, f"0.5*i*muw*theta*({inner})")] if e else []


def case1_source() -> str:
    """Deformed phase space with deformed position-momentum bracket and its ladder algebra."""
    lines = ["# deformed phase space, deformed [p, x]; B_ij = (1/chi - chi) p_j x_i"]
    lines += _header("case1", TWO_MODE_GENS + PHASE_GENS + ("K1", "K2"), DEFORMATION_PARAMS)
    _phase_space_common(lines)
    for i, j in PAIRS:
        lines.append(_rel(f"px_{i}{j}", f"bracket(p{i}, x{j}, chi)", _join([(-1, "i*eta*I")] if i == j else [])))
    b = lambda i, j: f"(1/chi - chi)*{{xi}} p{j} x{i}"  # noqa: E731
    for i, j in PAIRS:
        t = [(1, f"0.5*eta*({_xi(i)}/chi + {_xi(j, True)})")] if i == j else []
        t += _eps_term(i, j, f"I + {_xi(i)} {_xi(j, True)}")
        t.append((-1, "0.5*i*" + b(i, j).format(xi=_xi(j, True))))
        lines.append(_rel(f"bmbp_{i}{j}", f"bracket(bm{i}, bp{j}, chi)", _join(t)))
    for i, j in PAIRS:
        t = [(1, f"0.5*eta*({_xi(j, True)} - {_xi(i, True)}/chi)")] if i == j else []
        t += _eps_term(i, j, f"I - {_xi(i, True)} {_xi(j, True)}")
        t.append((-1, "0.5*i*" + b(i, j).format(xi=_xi(j, True))))
        lines.append(_rel(f"bpbp_{i}{j}", f"bracket(bp{i}, bp{j}, chi)", _join(t)))
    for i, j in PAIRS:
        t = [(1, f"0.5*eta*({_xi(i)}/chi - {_xi(j)})")] if i == j else []
        t += _eps_term(i, j, f"I - {_xi(i)} {_xi(j)}")
        t.append((1, "0.5*i*" + b(i, j).format(xi=_xi(j))))
        lines.append(_rel(f"bmbm_{i}{j}", f"bracket(bm{i}, bm{j}, chi)", _join(t)))
    return _finish(lines)


def _cd(i: int, j: int, xi_c: str, sign_d: str, xi_d: str) -> str:
    """(1 - chi)(xi_c p_j x_i  sign_d  xi_d x_j p_i), i.e. xi_c C_ji +/- xi_d D_ji."""
    return f"(1 - chi)*({xi_c} p{j} x{i} {sign_d} {xi_d} x{j} p{i})"


def case2_source() -> str:
    """Deformed phase space with undeformed position-momentum bracket and its ladder algebra."""
    lines = ["# deformed phase space, undeformed [p, x]; C_ji = (1 - chi) p_j x_i, D_ji = (1 - chi) x_j p_i"]
    lines += _header("case2", TWO_MODE_GENS + PHASE_GENS + ("K1", "K2"),
                     tuple(kv for kv in DEFORMATION_PARAMS if kv[0] != "eta"))
    _phase_space_common(lines)
    for i, j in PAIRS:
        lines.append(_rel(f"px_{i}{j}", f"bracket(p{i}, x{j}, 1)", _join([(-1, "i*I")] if i == j else [])))
    for i, j in PAIRS:
        t = [(1, "i*I")] if i == j else []
        lines.append(_rel(f"xp_{i}{j}", f"bracket(x{i}, p{j}, chi)", _join(t + [(1, f"(1 - chi)*p{j} x{i}")])))
    for i, j in PAIRS:
        t = [(-1, "i*I")] if i == j else []
        lines.append(_rel(f"pxchi_{i}{j}", f"bracket(p{i}, x{j}, chi)", _join(t + [(1, f"(1 - chi)*x{j} p{i}")])))
    for i, j in PAIRS:
        t = [(1, f"0.5*({_xi(i)} + {_xi(j, True)})")] if i == j else []
        t += _eps_term(i, j, f"I + {_xi(i)} {_xi(j, True)}")
        t.append((-1, "0.5*i*" + _cd(i, j, _xi(j, True), "-", _xi(i))))
        lines.append(_rel(f"bmbp_{i}{j}", f"bracket(bm{i}, bp{j}, chi)", _join(t)))
    for i, j in PAIRS:
        t = [(1, f"0.5*({_xi(j, True)} - {_xi(i, True)})")] if i == j else []
        t += _eps_term(i, j, f"I - {_xi(i, True)} {_xi(j, True)}")
        t.append((-1, "0.5*i*" + _cd(i, j, _xi(j, True), "+", _xi(i, True))))
        lines.append(_rel(f"bpbp_{i}{j}", f"bracket(bp{i}, bp{j}, chi)", _join(t)))
    for i, j in PAIRS:
        t = [(1, f"0.5*({_xi(i)} - {_xi(j)})")] if i == j else []
        t += _eps_term(i, j, f"I - {_xi(i)} {_xi(j)}")
        t.append((1, "0.5*i*" + _cd(i, j, _xi(j), "+", _xi(i))))
        lines.append(_rel(f"bmbm_{i}{j}", f"bracket(bm{i}, bm{j}, chi)", _join(t)))
    return _finish(lines)


def fermionic_c1_source() -> str:
    """nu = 1 limit of the first ladder algebra, right-hand sides in exp(+-i pi K)."""
    lines = ["# deformed fermionic limit, first construction"]
    lines += _header("fermionic_c1", TWO_MODE_GENS + ("K1", "K2"), [])
    rhs = {
        "bmbp": lambda i, j: f"0.5*({_kpi(j, True)} - {_kpi(i)})",
        "bpbp": lambda i, j: f"0.5*({_kpi(j, True)} + {_kpi(i, True)})",
        "bmbm": lambda i, j: f"0.5*({_kpi(i)} + {_kpi(j)})",
    }
    ops = {"bmbp": ("bm", "bp"), "bpbp": ("bp", "bp"), "bmbm": ("bm", "bm")}
    for fam, (u, v) in ops.items():
        for i, j in PAIRS:
            lines.append(_rel(f"{fam}_{i}{j}", f"antibracket({u}{i}, {v}{j})", rhs[fam](i, j) if i == j else "0"))
    return _finish(lines)


def fermionic_c2_source() -> str:
    """nu = 1 limit of the second ladder algebra; the C and D terms survive."""
    lines = ["# deformed fermionic limit, second construction"]
    lines += _header("fermionic_c2", TWO_MODE_GENS + PHASE_GENS + ("K1", "K2"), (("chi", "-1"),))
    for i, j in PAIRS:
        t = [(1, f"0.5*({_kpi(i)} + {_kpi(j, True)})")] if i == j else []
        t.append((-1, "0.5*i*" + _cd(i, j, _kpi(j, True), "-", _kpi(i))))
        lines.append(_rel(f"bmbp_{i}{j}", f"antibracket(bm{i}, bp{j})", _join(t)))
    for i, j in PAIRS:
        t = [(1, f"0.5*({_kpi(j, True)} - {_kpi(i, True)})")] if i == j else []
        t.append((-1, "0.5*i*" + _cd(i, j, _kpi(j, True), "+", _kpi(i, True))))
        lines.append(_rel(f"bpbp_{i}{j}", f"antibracket(bp{i}, bp{j})", _join(t)))
    for i, j in PAIRS:
        t = [(1, f"0.5*({_kpi(i)} - {_kpi(j)})")] if i == j else []
        t.append((1, "0.5*i*" + _cd(i, j, _kpi(j), "+", _kpi(i))))
        lines.append(_rel(f"bmbm_{i}{j}", f"antibracket(bm{i}, bm{j})", _join(t)))
    return _finish(lines)


GDOA_DEFAULT_ALPHAS = (0.5, -0.25, -0.25)


def gdoa_source(lam: int = 3, alphas=None) -> str:
    """Generalized deformed oscillator algebra with lam projectors."""
    if lam < 1:
        raise ValueError("lambda must be >= 1")
    if alphas is None:
        alphas = GDOA_DEFAULT_ALPHAS if lam == 3 else (0.0,) * lam
    if len(alphas) != lam:
        raise ValueError(f"need {lam} alphas, got {len(alphas)}")
    projs = [f"P{m}" for m in range(lam)]
    lines = [f"# C_lambda-extended oscillator, lambda = {lam}"]
    lines += _header("gdoa", ("a", "N", *projs), [(f"alpha{m}", repr(float(a))) for m, a in enumerate(alphas)])
    ad = "dagger(a)"
    lines.append(_rel("num_raise", f"bracket(N, {ad}, 1)", ad))
    lines.append(_rel("num_lower", "bracket(N, a, 1)", "-a"))
    lines.append(_rel("heis", f"bracket(a, {ad}, 1)", _join([(1, "I")] + [(1, f"alpha{m}*P{m}") for m in range(lam)])))

    def beta(m):
        return "0" if m == 0 else " + ".join(f"alpha{k}" for k in range(m))

    lines.append(_rel("f_lower", f"{ad} a", _join([(1, "N")] + [(1, f"({beta(m)})*P{m}") for m in range(1, lam)])))
    raised = [(1, "N"), (1, "I")] + [(1, f"({beta((m + 1) % lam)})*P{m}") for m in range(lam) if (m + 1) % lam]
    lines.append(_rel("f_raise", f"a {ad}", _join(raised)))
    lines.append(_rel("complete", " + ".join(projs), "I"))
    for m in range(lam):
        lines.append(_rel(f"npc_{m}", f"bracket(N, P{m}, 1)", "0"))
    for m in range(lam):
        lines.append(_rel(f"idem_{m}", f"power(P{m}, 2)", f"P{m}"))
    for m in range(lam):
        lines.append(_rel(f"shift_{m}", f"{ad} P{m}", f"P{(m + 1) % lam} {ad}"))
    for m in range(lam):
        lines.append(_rel(f"shift_conj_{m}", f"P{m} a", f"a P{(m + 1) % lam}"))
    return _finish(lines)


def calogero_vasiliev_source() -> str:
    lines = _header("calogero_vasiliev", ("a", "K"), (("kappa", "0.5"),))
    lines.append(_rel("r1", "bracket(a, dagger(a), 1)", "I + kappa*K"))
    lines.append(_rel("r2", "antibracket(K, dagger(a))", "0"))
    return _finish(lines)


def _coef(p: int, sign: str = "") -> str:
    """(sign i nu pi)^p / p! as DSL scalar text."""
    base = f"{sign}i*pi*nu"
    if p == 0:
        return "1"
    if p == 1:
        return f"({base})"
    return f"power({base}, {p})/{factorial(p)}"


def _kpow(k: str, p: int) -> str:
    return "I" if p == 0 else (k if p == 1 else f"power({k}, {p})")


def deformed_clambda_source(lam: int = 4) -> str:
    """Taylor-block form of the deformed ladder algebra truncated at order lam - 1."""
    if lam < 2:
        raise ValueError("the Taylor-block presentation needs lambda >= 2")
    n = lam - 1 if (lam - 1) % 2 else lam - 2     # largest odd <= lam - 1
    m = lam - 1 if (lam - 1) % 2 == 0 else lam - 2  # largest even <= lam - 1
    lines = [f"# deformed C_lambda-extended ladder algebra, lambda = {lam}, truncation order {lam - 1}"]
    lines += _header("deformed_clambda", TWO_MODE_GENS + PHASE_GENS + ("K1", "K2", "N1", "N2"),
                     tuple(kv for kv in DEFORMATION_PARAMS if kv[0] != "eta"))

    def cd_sum(i, j, sign, k_j):
        parts = []
        for p in range(lam):
            if p == 0:
                parts.append(f"(p{j} x{i} - x{j} p{i})")
                continue
            body = f"{_kpow(k_j, p)} p{j} x{i} - {_kpow(f'K{i}', p)} x{j} p{i}"
            parts.append(f"{_coef(p, sign)}*({body})")
        return f"(1 - chi)*({' + '.join(parts)})"

    for i, j in PAIRS:
        t = []
        if i == j:
            r = [f"0.5*{_coef(2 * ell - 1)}*({_kpow(f'K{i}', 2 * ell - 1)} - {_kpow(f'K{j}', 2 * ell - 1)})"
                 for ell in range(1, (n + 1) // 2 + 1)]
            r += [f"0.5*{_coef(2 * k)}*({_kpow(f'K{i}', 2 * k)} + {_kpow(f'K{j}', 2 * k)})"
                  for k in range(1, m // 2 + 1)]
            t.append((1, f"(I + {' + '.join(r)})"))
        e = _eps(i, j)
        if e:
            a = " + ".join(f"{_coef(al)}*{_kpow(f'(K{i} - K{j})', al)}" for al in range(1, lam))
            # the alpha = 0 term of the sum is a second identity
            t.append((e, f"0.5*i*theta*muw*(I + I + {a})"))
        t.append((-1, "0.5*i*" + cd_sum(i, j, "", f"(-K{j})")))
        lines.append(_rel(f"taylor_bmbp_{i}{j}", f"bracket(bm{i}, bp{j}, chi)", _join(t)))
    for fam, sign, lead in (("taylor_bpbp", "-", -1), ("taylor_bmbm", "", 1)):
        u = "bp" if fam.endswith("bpbp") else "bm"
        for i, j in PAIRS:
            t = []
            if i == j:
                first, second = (f"K{j}", f"K{i}") if u == "bp" else (f"K{i}", f"K{j}")
                s = " + ".join(f"0.5*{_coef(al, sign)}*({_kpow(first, al)} - {_kpow(second, al)})"
                               for al in range(1, lam))
                t.append((1, f"({s})"))
            e = _eps(i, j)
            if e:
                s = " + ".join(f"{_coef(al, sign)}*{_kpow(f'(K{i} + K{j})', al)}" for al in range(1, lam))
                t.append((-e, f"0.5*i*muw*theta*({s})"))
            t.append((lead, "0.5*i*" + cd_sum(i, j, sign, f"K{j}")))
            lines.append(_rel(f"{fam}_{i}{j}", f"bracket({u}{i}, {u}{j}, chi)", _join(t)))
    phase = f"exp(2*pi*i/{lam})"
    for i, j in PAIRS:
        lines.append(_rel(f"nbm_{i}{j}", f"bracket(N{i}, bm{j}, 1)", f"-bm{i}" if i == j else "0"))
    for i, j in PAIRS:
        lines.append(_rel(f"nbp_{i}{j}", f"bracket(N{i}, bp{j}, 1)", f"bp{i}" if i == j else "0"))
    for i, j in PAIRS:
        lines.append(_rel(f"kbm_{i}{j}", f"K{i} bm{j}", f"exp(-2*pi*i/{lam})*bm{j} K{i}" if i == j else "0"))
    for i, j in PAIRS:
        lines.append(_rel(f"kbp_{i}{j}", f"K{i} bp{j}", f"{phase}*bp{j} K{i}" if i == j else "0"))
    return _finish(lines)


PRESET_BUILDERS = {
    "boson": boson_source,
    "bosonic": bosonic_source,
    "case1": case1_source,
    "case2": case2_source,
    "fermionic_c1": fermionic_c1_source,
    "fermionic_c2": fermionic_c2_source,
    "gdoa": gdoa_source,
    "calogero_vasiliev": calogero_vasiliev_source,
    "deformed_clambda": deformed_clambda_source,
}
