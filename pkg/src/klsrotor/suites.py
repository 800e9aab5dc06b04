"""Verification suites and the structured report they produce.

Every check is deterministic given the master seed: randomized trials draw
from ``default_rng([seed, suite_id, index])``, so results do not depend on
execution order.  A check is either asserted (``pass``/``fail``) or
informational (``flag``); only failed asserted checks fail a run.
"""

from __future__ import annotations

import math
import platform
import time
from dataclasses import dataclass, field

import numpy as np
import scipy

from . import __version__
from .config import RunConfig, digest
from .criterion import finite_mode_sum, integral_Id, lro_verdict
from .rotor import (RotorModel, assemble_hamiltonian, build_lattice, dispersion,
                    linear_term, quadratic_constant, reflect_field)
from .rp import curvature_check, ground_energy, plane_wave_probe, rp_inequalities
from .schatten import (RANDOM_KINDS, adj, complete_to_unitary, hankel_family, identity_rule,
                       kls_gap, random_matrix, rank_one_family, shift_rule, truncation_ladder)
from .spectra import (SPECTRAL_LIMIT, full_spectrum, ground_state, momentum_observables,
                      parseval_gap, sum_rule, symmetry_report)
from .vectorize import PairingU, expectation_identity, identity_residuals, rp_expectation_bound

SCHEMA_VERSION = 1
SUITE_IDS = {"kls": 1, "vectorize": 2, "ladder": 3, "criterion": 4, "rotor": 5, "rp": 6}
ORDER = ("kls", "vectorize", "ladder", "criterion", "rotor", "rp")

I2_REFERENCE = 0.909173
I3_REFERENCE = 0.643954


def _clean(v):
    if isinstance(v, dict):
        return {k: _clean(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_clean(x) for x in v]
    if isinstance(v, (np.floating, float)):
        v = float(v)
        return v if math.isfinite(v) else repr(v)
    if isinstance(v, (np.integer,)):
        return int(v)
    if isinstance(v, np.bool_):
        return bool(v)
    return v


@dataclass
class Check:
    name: str
    inputs: dict
    values: dict
    slacks: dict
    status: str
    digest: str = ""

    def as_dict(self) -> dict:
        return {"name": self.name, "inputs_digest": self.digest, "inputs": _clean(self.inputs),
                "values": _clean(self.values), "slacks": _clean(self.slacks), "status": self.status}


def check(name, inputs, values, slacks=None, ok=True, asserted=True) -> Check:
    status = ("pass" if ok else "fail") if asserted else "flag"
    return Check(name, inputs, values, slacks or {}, status, digest(_clean(inputs)))


@dataclass
class SuiteReport:
    config: dict
    seed: int
    checks: list = field(default_factory=list)
    timing: dict = field(default_factory=dict)

    @property
    def failed(self) -> list:
        return [c for c in self.checks if c.status == "fail"]

    @property
    def ok(self) -> bool:
        return not self.failed

    def as_dict(self) -> dict:
        counts = {s: sum(c.status == s for c in self.checks) for s in ("pass", "fail", "flag")}
        return {
            "schema_version": SCHEMA_VERSION,
            "config": self.config,
            "seed": self.seed,
            "summary": counts,
            "checks": [c.as_dict() for c in self.checks],
            "environment": environment(),
            "timing": {k: round(v, 3) for k, v in self.timing.items()},
        }


def environment() -> dict:
    return {"package": __version__, "python": platform.python_version(),
            "numpy": np.__version__, "scipy": scipy.__version__,
            "platform": platform.platform()}


def _rng(seed: int, suite: str, i: int) -> np.random.Generator:
    return np.random.default_rng([seed, SUITE_IDS[suite], i])


def _ginibre(rng, n, m=None):
    m = n if m is None else m
    return (rng.standard_normal((n, m)) + 1j * rng.standard_normal((n, m))) / np.sqrt(2)


# --------------------------------------------------------------------- kls


def suite_kls(cfg: RunConfig) -> list[Check]:
    seed, trials, tol = cfg.random.seed, cfg.random.trials, cfg.tol.ineq
    dmax = min(cfg.random.max_dim, 16)
    worst, worst_i, imag = math.inf, -1, 0.0
    n_square = 0
    for i in range(trials):
        rng = _rng(seed, "kls", i)
        if rng.random() < 0.5:
            n = m = int(rng.integers(1, dmax + 1))
            n_square += 1
        else:
            n = int(rng.integers(1, dmax + 1))
            m = int(rng.integers(1, min(12, dmax) + 1))
        c_kinds = RANDOM_KINDS if n == m else ("ginibre", "partial_isometry")
        op_kinds = ("ginibre", "hermitian", "psd")
        c = random_matrix(c_kinds[rng.integers(len(c_kinds))], n, m, rng)
        A = random_matrix(op_kinds[rng.integers(3)], m, m, rng)
        B = random_matrix(op_kinds[rng.integers(3)], n, n, rng)
        rep = kls_gap(c, A, B)
        rel = rep.slack / (1.0 + abs(rep.rhs))
        imag = max(imag, rep.imag_residue / (1.0 + abs(rep.rhs)))
        if rel < worst:
            worst, worst_i = rel, i
    out = [check("kls.random_triples",
                 {"seed": seed, "trials": trials, "max_dim": dmax},
                 {"square_trials": n_square, "worst_trial": worst_i, "max_imag_residue": imag},
                 {"min_relative_slack": worst}, ok=worst >= -tol)]

    # equality: c unitary, A = c* B c
    gap = 0.0
    for i in range(50):
        rng = _rng(seed, "kls", trials + i)
        n = int(rng.integers(1, dmax + 1))
        u = complete_to_unitary(_ginibre(rng, n))
        B = _ginibre(rng, n)
        A = adj(u) @ B @ u
        rep = kls_gap(u, A, B)
        gap = max(gap, abs(rep.slack) / (1.0 + abs(rep.rhs)))
    out.append(check("kls.equality_unitary", {"seed": seed, "cases": 50},
                     {"max_relative_gap": gap}, {"margin": tol - gap}, ok=gap <= tol))

    # scalar case: |c|^2 |a b| <= |c|^2 (|a|^2 + |b|^2) / 2, equality at a = b
    worst_s, gap_s = math.inf, 0.0
    for i in range(50):
        rng = _rng(seed, "kls", trials + 50 + i)
        c, a, b = (complex(*rng.standard_normal(2)) for _ in range(3))
        rep = kls_gap([[c]], [[a]], [[b]])
        worst_s = min(worst_s, rep.slack / (1.0 + rep.rhs))
        eq = kls_gap([[c]], [[a]], [[a]])
        gap_s = max(gap_s, abs(eq.slack) / (1.0 + eq.rhs))
    out.append(check("kls.scalar_case", {"seed": seed, "cases": 50},
                     {"max_equality_gap": gap_s}, {"min_relative_slack": worst_s},
                     ok=worst_s >= -tol and gap_s <= tol))
    return out


# --------------------------------------------------------------- vectorize


def suite_vectorize(cfg: RunConfig) -> list[Check]:
    seed, trials = cfg.random.seed, cfg.random.trials
    dmax = min(cfg.random.max_dim, 8)
    worst: dict[str, float] = {}
    bound_slack, ident_gap = math.inf, 0.0
    for i in range(trials):
        rng = _rng(seed, "vectorize", i)
        n = int(rng.integers(1, dmax + 1))
        c = _ginibre(rng, n)
        c /= np.linalg.norm(c)
        A = _ginibre(rng, n)
        A /= np.linalg.norm(A, 2)
        B = _ginibre(rng, n)
        B /= np.linalg.norm(B, 2)
        U = PairingU(complete_to_unitary(_ginibre(rng, n)))
        res = identity_residuals(c, A, B, U, T_diag=rng.standard_normal(n),
                                 S_diag=rng.standard_normal(n))
        for k, v in res.items():
            worst[k] = max(worst.get(k, 0.0), v)
        (re, im), tr = expectation_identity(c, A, B)
        ident_gap = max(ident_gap, abs(complex(re, im) - tr))
        eb = rp_expectation_bound(c, A, B, U)
        bound_slack = min(bound_slack, eb.slack / (1.0 + abs(eb.rhs)))
    tol = cfg.tol.identity
    inputs = {"seed": seed, "trials": trials, "max_dim": dmax}
    out = [check(f"vectorize.{k}", inputs, {"max_residual": v}, {"margin": tol - v}, ok=v <= tol)
           for k, v in sorted(worst.items())]
    out.append(check("vectorize.expectation_identity", inputs, {"max_residual": ident_gap},
                     {"margin": tol - ident_gap}, ok=ident_gap <= tol))
    out.append(check("vectorize.reflected_bound", inputs, {},
                     {"min_relative_slack": bound_slack}, ok=bound_slack >= -cfg.tol.ineq))
    return out


# ------------------------------------------------------------------ ladder


LADDER_SIZES = (8, 16, 32, 64)
LADDER_RULES = {"identity": identity_rule, "shift": shift_rule}


def suite_ladder(cfg: RunConfig) -> list[Check]:
    out = []
    for fam in (rank_one_family(), hankel_family()):
        for a_name, b_name in (("identity", "identity"), ("shift", "identity"), ("shift", "shift")):
            rungs = truncation_ladder(fam, LADDER_RULES[a_name], LADDER_RULES[b_name], LADDER_SIZES)
            slack = min(r.report.slack for r in rungs)
            inc = all(r.increments_ok for r in rungs)
            inputs = {"family": fam.name, "A": a_name, "B": b_name, "sizes": list(LADDER_SIZES)}
            values = {"lhs": [r.report.lhs for r in rungs], "rhs": [r.report.rhs for r in rungs],
                      "tail": [r.tail for r in rungs],
                      "lhs_increment": [r.lhs_increment for r in rungs[1:]],
                      "lhs_increment_bound": [r.increment_bound_lhs for r in rungs[1:]],
                      "rhs_increment": [r.rhs_increment for r in rungs[1:]],
                      "rhs_increment_bound": [r.increment_bound_rhs for r in rungs[1:]]}
            out.append(check(f"ladder.{fam.name}.{a_name}_{b_name}", inputs, values,
                             {"min_slack": slack}, ok=slack >= -cfg.tol.ineq and inc))
    return out


# --------------------------------------------------------------- criterion


def _enumerate_2x2() -> float:
    # modes (0, pi), (pi, 0), (pi, pi) of the 2x2 grid, with E = 2, 2, 4
    return (2 ** -0.5 + 2 ** -0.5 + 4 ** -0.5) / 4


def suite_criterion(cfg: RunConfig) -> list[Check]:
    tol = cfg.tol.integral
    out = []
    r2 = integral_Id(2, tol)
    err2 = abs(r2.value - I2_REFERENCE)
    out.append(check("criterion.integral_d2", {"d": 2, "tol": tol},
                     {"value": r2.value, "error_estimate": r2.errorEstimate,
                      "trace": r2.refinementTrace}, {"margin": 1e-4 - err2}, ok=err2 <= 1e-4))
    r3 = integral_Id(3, tol)
    err3 = abs(r3.value - I3_REFERENCE)
    out.append(check("criterion.integral_d3", {"d": 3, "tol": tol},
                     {"value": r3.value, "error_estimate": r3.errorEstimate,
                      "trace": r3.refinementTrace}, {"margin": 1e-3 - err3}, ok=err3 <= 1e-3))
    r1 = integral_Id(1, tol)
    out.append(check("criterion.integral_d1_diverges", {"d": 1, "tol": tol},
                     {"diverged": r1.diverged, "trace": r1.refinementTrace}, ok=r1.diverged))

    Ns = (4, 8, 16, 32)
    sums = [finite_mode_sum(2, N) for N in Ns]
    diffs = [r2.value - s for s in sums]
    trend = all(b < a for a, b in zip(diffs, diffs[1:]))
    out.append(check("criterion.finite_sum_d2", {"d": 2, "N": list(Ns)},
                     {"sums": sums, "differences": diffs, "monotone": trend},
                     {"margin": 0.02 - abs(diffs[-1])}, ok=abs(diffs[-1]) <= 0.02 and trend))
    enum = _enumerate_2x2()
    s1 = finite_mode_sum(2, 1)
    out.append(check("criterion.finite_sum_2x2", {"d": 2, "N": 1},
                     {"sum": s1, "enumerated": enum}, {"residual": abs(s1 - enum)},
                     ok=abs(s1 - enum) <= 1e-14))
    ones = [finite_mode_sum(1, N) for N in (4, 16, 64, 256)]
    out.append(check("criterion.finite_sum_d1_growth", {"d": 1, "N": [4, 16, 64, 256]},
                     {"sums": ones}, ok=all(b > a for a, b in zip(ones, ones[1:]))))

    v = lro_verdict(1.0, 1.0, 2, tol=tol)
    out.append(check("criterion.verdict_unit", {"I": 1.0, "J": 1.0, "d": 2, "N": "inf"},
                     {"holds": v.holds, "lowerBoundC": v.lowerBoundC, "S": v.S},
                     ok=v.holds and abs(v.lowerBoundC - 0.0454) <= 5e-4))
    v_half = lro_verdict(0.5, 0.5, 2, tol=tol)
    out.append(check("criterion.verdict_half", {"I": 0.5, "J": 0.5, "d": 2, "N": "inf"},
                     {"holds": v_half.holds, "lowerBoundC": v_half.lowerBoundC},
                     ok=not v_half.holds and v_half.lowerBoundC < 0))
    v1 = lro_verdict(10.0, 10.0, 1, tol=tol)
    out.append(check("criterion.verdict_d1", {"I": 10.0, "J": 10.0, "d": 1, "N": "inf"},
                     {"holds": v1.holds}, ok=not v1.holds))
    scan = [0.5, 0.8, 0.9, 1.0, 2.0]
    held = [lro_verdict(p, 1.0, 2, tol=tol).holds for p in scan]
    mono = all(not (a and not b) for a, b in zip(held, held[1:]))
    out.append(check("criterion.verdict_monotone", {"IJ": scan, "d": 2}, {"holds": held}, ok=mono))
    return out


# ------------------------------------------------------------------- rotor


def _model(cfg: RunConfig, M: int, coupling: float | None = None) -> RotorModel:
    J = cfg.model.coupling if coupling is None else coupling
    return RotorModel(inertia=cfg.model.inertia, coupling=J, cutoff=M)


def rotor_tables(cfg: RunConfig, M: int):
    """Ground state and every momentum report at cutoff ``M``."""
    lat = build_lattice(cfg.model.d, cfg.N)
    model = _model(cfg, M)
    H = assemble_hamiltonian(model, lat)
    gs = ground_state(H, seed=cfg.random.seed)
    spec = full_spectrum(H) if H.dim <= SPECTRAL_LIMIT else None
    reports = [momentum_observables(gs, H, k, spec) for k in lat.momenta]
    return lat, H, gs, reports


def suite_rotor(cfg: RunConfig) -> list[Check]:
    t = cfg.tol
    cutoffs = cfg.model.cutoffs
    Mmax = cutoffs[-1]
    out = []
    base = {"d": cfg.model.d, "edge": cfg.model.edge, "I": cfg.model.inertia,
            "J": cfg.model.coupling}
    deficits, slack_hist = [], {}
    for M in cutoffs:
        lat, H, gs, reps = rotor_tables(cfg, M)
        inp = dict(base, M=M)
        sumG, rhs, half = sum_rule(gs, lat, M)
        deficits.append(half - rhs)
        out.append(check(f"rotor.sum_rule[M={M}]", inp,
                         {"sumG": sumG, "rhsTruncated": rhs, "half_volume": half,
                          "deficit": half - rhs},
                         {"residual": abs(sumG - rhs)}, ok=abs(sumG - rhs) <= t.sum_rule))
        pg = abs(parseval_gap(gs.vector, lat, M))
        out.append(check(f"rotor.parseval[M={M}]", inp, {"residual": pg}, ok=pg <= t.sum_rule))
        sym = symmetry_report(gs, lat, M, H.scale())
        out.append(check(f"rotor.symmetry[M={M}]", inp,
                         {"mean_spin": sym.mean_spin, "xy_mismatch": sym.xy_mismatch,
                          "degenerate": sym.degenerate, "E0": gs.energy, "gap": gs.gap,
                          "method": gs.method},
                         ok=sym.ok(t.symmetry) and not sym.degenerate))
        for r in reps:
            kin = dict(inp, k=list(r.k))
            tag = f"[M={M},k={','.join(f'{v:.4f}' for v in r.k)}]"
            if dispersion(r.k) == 0.0:
                out.append(check(f"rotor.zero_mode{tag}", kin, {"g0": r.g}, asserted=False))
                continue
            out.append(check(f"rotor.dcomm_bound{tag}", kin,
                             {"dcomm": r.dcomm, "bound": r.dcommBound},
                             {"slack": r.dcomm_slack}, ok=r.dcomm_slack >= -t.obs))
            red_gap = abs(r.dcomm - r.dcomm_reduction)
            out.append(check(f"rotor.dcomm_reduction{tag}", kin,
                             {"dcomm": r.dcomm, "sin2_reduction": r.dcomm_reduction},
                             {"residual": red_gap}, ok=red_gap <= t.obs))
            out.append(check(f"rotor.schwarz{tag}", kin,
                             {"g": r.g, "chi": r.chi, "dcomm": r.dcomm},
                             {"slack": r.schwarz_slack}, ok=r.schwarz_slack >= -t.obs))
            if r.chi_spectral is not None:
                rel = abs(r.chi - r.chi_spectral) / max(abs(r.chi_spectral), 1e-300)
                out.append(check(f"rotor.chi_spectral{tag}", kin,
                                 {"chi_solve": r.chi, "chi_spectral": r.chi_spectral},
                                 {"relative_residual": rel}, ok=rel <= t.chi_match))
            final = M == Mmax
            out.append(check(f"rotor.chi_bound{tag}", kin, {"chi": r.chi, "bound": r.chiBound},
                             {"slack": r.chi_slack}, ok=r.chi_slack >= -t.obs, asserted=final))
            out.append(check(f"rotor.g_bound{tag}", kin, {"g": r.g, "bound": r.gBound},
                             {"slack": r.g_slack}, ok=r.g_slack >= -t.obs, asserted=final))
            slack_hist.setdefault(r.k, []).append((r.chi_slack, r.g_slack))
    if len(cutoffs) > 1:
        shrink = all(b < a for a, b in zip(deficits, deficits[1:]))
        out.append(check("rotor.sum_rule_deficit_trend", dict(base, M=cutoffs),
                         {"deficits": deficits}, ok=shrink))
        for k, hist in slack_hist.items():
            chis = [h[0] for h in hist]
            gs_ = [h[1] for h in hist]

            def mono(xs):
                return all(b <= a for a, b in zip(xs, xs[1:])) or all(b >= a for a, b in zip(xs, xs[1:]))
            out.append(check(f"rotor.slack_trend[k={','.join(f'{v:.4f}' for v in k)}]",
                             dict(base, M=cutoffs, k=list(k)),
                             {"chi_slacks": chis, "g_slacks": gs_,
                              "monotone": mono(chis) and mono(gs_)}, asserted=False))
    out.extend(j0_benchmark(cfg))
    return out


def j0_benchmark(cfg: RunConfig) -> list[Check]:
    """Closed forms of the decoupled lattice: every rotor sits in ``n = 0``."""
    I = cfg.model.inertia
    M = cfg.model.cutoffs[0]
    lat = build_lattice(cfg.model.d, cfg.N)
    H = assemble_hamiltonian(_model(cfg, M, coupling=0.0), lat)
    gs = ground_state(H, seed=cfg.random.seed)
    tol = cfg.tol.j0
    errs = {"E0": abs(gs.energy), "gap": abs(gs.gap - 1.0 / (2 * I))}
    for k in lat.nonzero_momenta():
        r = momentum_observables(gs, H, k)
        errs["g"] = max(errs.get("g", 0.0), abs(r.g - 0.5))
        errs["chi"] = max(errs.get("chi", 0.0), abs(r.chi - I))
        errs["dcomm"] = max(errs.get("dcomm", 0.0), abs(r.dcomm - 1.0 / (4 * I)))
        errs["equality"] = max(errs.get("equality", 0.0), abs(r.g**2 - r.chi * r.dcomm))
    worst = max(errs.values())
    return [check("rotor.j0_benchmark", {"d": cfg.model.d, "edge": cfg.model.edge, "M": M, "I": I},
                  {"errors": errs}, {"margin": tol - worst}, ok=worst <= tol)]


# ---------------------------------------------------------------------- rp


def _dyadic_field(rng, n):
    # values on a 2^-8 grid keep b + const exact in floating point
    return (rng.integers(-256, 257, n) + 1j * rng.integers(-256, 257, n)) / 256.0


def suite_rp(cfg: RunConfig) -> list[Check]:
    t = cfg.tol
    seed = cfg.random.seed
    M = cfg.model.cutoffs[0]
    lat = build_lattice(cfg.model.d, cfg.N)
    model = _model(cfg, M)
    e0 = ground_energy(model, lat)
    tau = t.energy * (1.0 + abs(e0))
    inp = {"d": cfg.model.d, "edge": cfg.model.edge, "M": M, "I": cfg.model.inertia,
           "J": cfg.model.coupling, "seed": seed}
    out = []

    mono, bond = math.inf, math.inf
    for i in range(cfg.random.rp_trials):
        rng = _rng(seed, "rp", i)
        b = rng.standard_normal(lat.n_sites) + 1j * rng.standard_normal(lat.n_sites)
        rep = rp_inequalities(model, lat, b, e0)
        mono = min(mono, rep.monotoneSlack)
        bond = min(bond, rep.bondSlack)
    out.append(check("rp.random_fields", dict(inp, trials=cfg.random.rp_trials), {"E0": e0},
                     {"min_monotone": mono, "min_bond": bond},
                     ok=mono >= -tau and bond >= -tau))

    rng = _rng(seed, "rp", 10_000)
    b = rng.standard_normal(lat.n_sites) + 1j * rng.standard_normal(lat.n_sites)
    b_sym, _, _ = reflect_field(b, lat)
    rep = rp_inequalities(model, lat, b_sym, e0)
    out.append(check("rp.mirror_symmetric", inp, {"E_b": rep.e_b},
                     {"bondSlack": rep.bondSlack}, ok=rep.bondSlack == 0.0))

    bd = _dyadic_field(rng, lat.n_sites)
    shift = 0.375 - 0.625j
    H1 = assemble_hamiltonian(model, lat, bd).matrix
    H2 = assemble_hamiltonian(model, lat, bd + shift).matrix
    same = (H1 != H2).nnz == 0
    e1, e2 = ground_energy(model, lat, bd), ground_energy(model, lat, bd + shift)
    const = ground_energy(model, lat, np.full(lat.n_sites, shift))
    out.append(check("rp.constant_shift", dict(inp, shift=[shift.real, shift.imag]),
                     {"identical_matrices": same, "E_b": e1, "E_b_shifted": e2,
                      "E_const": const},
                     {"monotone_constant": const - e0},
                     ok=same and e1 == e2 and const == e0))

    # field confined to the left half: its right reflection is zero
    b_left = np.where(lat.left_mask, b, 0.0)
    rep = rp_inequalities(model, lat, b_left, e0)
    out.append(check("rp.left_supported", inp, {"E_bR": rep.e_right, "E0": e0},
                     {"residual": abs(rep.e_right - e0)}, ok=abs(rep.e_right - e0) <= tau))

    # variational: E0(lam b) <= E0 + lam <H'> + lam^2 C
    H0 = assemble_hamiltonian(model, lat)
    gs = ground_state(H0, seed=seed)
    hp = float(np.vdot(gs.vector, linear_term(model, lat, b) @ gs.vector).real)
    cb = quadratic_constant(lat, b, model.coupling)
    worst = math.inf
    for lam in (0.05, 0.2, 0.5, 1.0):
        worst = min(worst, e0 + lam * hp + lam * lam * cb - ground_energy(model, lat, lam * b))
    out.append(check("rp.variational", inp, {"first_order": hp, "C": cb},
                     {"min_slack": worst}, ok=worst >= -tau))

    mism, lowest = 0.0, math.inf
    for i in range(cfg.random.curvature_trials):
        rng = _rng(seed, "rp", 20_000 + i)
        b = rng.standard_normal(lat.n_sites) + 1j * rng.standard_normal(lat.n_sites)
        cr = curvature_check(model, lat, b)
        mism = max(mism, cr.mismatch / (1.0 + abs(cr.ptSecond)))
        lowest = min(lowest, cr.fdSecond, cr.ptSecond)
    out.append(check("rp.curvature", dict(inp, trials=cfg.random.curvature_trials), {},
                     {"max_relative_mismatch": mism, "min_second_derivative": lowest},
                     ok=mism <= t.curvature and lowest >= -t.curvature))

    Mmax = cfg.model.cutoffs[-1]
    for Mp in cfg.model.cutoffs:
        mp = _model(cfg, Mp)
        H = assemble_hamiltonian(mp, lat)
        g = ground_state(H, seed=seed)
        for k in lat.nonzero_momenta():
            pw = plane_wave_probe(mp, lat, k, g)
            tag = f"[M={Mp},k={','.join(f'{v:.4f}' for v in k)}]"
            kin = dict(inp, M=Mp, k=list(k))
            c_res = max(abs(pw.cOfB - pw.cAnalytic), abs(pw.cFromH - pw.cOfB), pw.quadratic_residual)
            par = abs(pw.re_part + pw.im_part - pw.chi) if model.coupling else 0.0
            out.append(check(f"rp.plane_wave_C{tag}", kin,
                             {"C": pw.cOfB, "J_E": pw.cAnalytic, "C_from_H": pw.cFromH},
                             {"residual": c_res, "linear_residual": pw.linear_term_residual,
                              "parallelogram": par},
                             ok=c_res <= 1e-12 and pw.linear_term_residual <= 1e-12
                             and par <= t.obs * (1.0 + abs(pw.chi))))
            out.append(check(f"rp.plane_wave_bounds{tag}", kin, {"chi": pw.chi, "g": pw.g},
                             {"chiSlack": pw.chiSlack, "gSlack": pw.gSlack},
                             ok=pw.chiSlack >= -t.obs and pw.gSlack >= -t.obs,
                             asserted=Mp == Mmax))
    return out


SUITES = {"kls": suite_kls, "vectorize": suite_vectorize, "ladder": suite_ladder,
          "criterion": suite_criterion, "rotor": suite_rotor, "rp": suite_rp}


def run_suite(cfg: RunConfig) -> SuiteReport:
    report = SuiteReport(config=cfg.to_dict(), seed=cfg.random.seed)
    for name in ORDER:
        if name not in cfg.suites:
            continue
        t0 = time.perf_counter()
        report.checks.extend(SUITES[name](cfg))
        report.timing[name] = time.perf_counter() - t0
    return report
