"""Named invariant checks shared by the CLI and the test suite.

A :class:`Check` records a measured defect and its tolerance.  ``kind``
``"upper"`` passes when ``defect <= tol``; ``kind`` ``"lower"`` marks an
expected violation and passes when ``defect > tol``.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass
from typing import Callable, Iterable

import numpy as np
from scipy.linalg import expm

from . import dynamics as dyn
from . import entanglement as ent
from . import fock, susino, thermal
from .fock import ModeConfig, anticomm, comm, dag
from .graded import GradedAlgebra, theta_matrix_model


@dataclass(frozen=True)
class Check:
    name: str
    defect: float
    tol: float
    kind: str = "upper"

    @property
    def passed(self) -> bool:
        if not np.isfinite(self.defect):
            return False
        return self.defect <= self.tol if self.kind == "upper" else self.defect > self.tol

    def as_dict(self) -> dict:
        return {**asdict(self), "passed": self.passed}


@dataclass(frozen=True)
class CheckSettings:
    """Inputs of the invariant suites (a subset of the CLI run config)."""

    cutoff: int = 12
    margin: int = 4
    couplings: tuple[float, ...] = (1.0, 0.7)
    g: float = 0.3
    betas: tuple[float, ...] = (0.3, 0.7, float(np.log(2)), 2.0, 5.0)
    s_values: tuple[float, ...] = (0.1, 1.0, float(np.pi))
    thermal_cutoff: int = 40
    wz_cutoff: int = 40
    seed: int = 0


# ---------------------------------------------------------------------------
# individual relations
# ---------------------------------------------------------------------------

def algebra_relations(config: ModeConfig, margin: int = 1) -> dict[str, float]:
    """Max defects of the CAR/CCR and mixed relations on the safe subspace."""
    P = fock.safe_projector(config, margin)
    one = fock.identity(config)
    zero = one * 0
    a = [fock.annihilator(config, "fermion", i) for i in range(config.n_fermion)]
    b = [fock.annihilator(config, "boson", j) for j in range(config.n_boson)]
    worst = {"car": 0.0, "ccr": 0.0, "fermion_pairs": 0.0, "boson_pairs": 0.0, "mixed": 0.0}
    for i, ai in enumerate(a):
        for k, ak in enumerate(a):
            target = one if i == k else zero
            worst["car"] = max(worst["car"], fock.defect(anticomm(ai, dag(ak)), target, P))
            worst["fermion_pairs"] = max(worst["fermion_pairs"], fock.max_abs(anticomm(ai, ak)))
        for bk in b:
            worst["mixed"] = max(
                worst["mixed"], fock.max_abs(comm(ai, bk)), fock.max_abs(comm(ai, dag(bk)))
            )
    for j, bj in enumerate(b):
        for k, bk in enumerate(b):
            target = one if j == k else zero
            worst["ccr"] = max(worst["ccr"], fock.defect(comm(bj, dag(bk)), target, P))
            worst["boson_pairs"] = max(worst["boson_pairs"], fock.max_abs(comm(bj, bk)))
    return worst


def expm_defect(G, s: float) -> float:
    G = dyn._dense(G)
    return fock.max_abs(dyn.SpectralEvolution(G).unitary(s) - expm(1j * s * G))


# ---------------------------------------------------------------------------
# suites
# ---------------------------------------------------------------------------

def fock_suite(st: CheckSettings) -> list[Check]:
    n = len(st.couplings)
    config = ModeConfig(n, n, st.cutoff, st.couplings, safe_margin=st.margin)
    out = [Check(f"fock.{k}", v, 1e-12) for k, v in algebra_relations(config, 1).items()]
    spec = dyn.SuperchargeSpec(config)
    G, H = dyn.build_G(spec), dyn.build_H(spec)
    P = fock.safe_projector(config, 1)
    out.append(Check("fock.G_squared_is_H", fock.defect(G @ G, H, P), 1e-12))
    out.append(Check("fock.N_commutes_with_G", fock.defect(comm(fock.number_ops(config).N, G), 0 * G), 1e-12))
    out.append(Check("fock.parity_anticommutes_with_G", fock.max_abs(anticomm(fock.parity(config), G)), 1e-12))
    one = ModeConfig(1, 1, st.cutoff)
    G1 = dyn.build_G(dyn.SuperchargeSpec(one))
    out.append(Check("fock.single_mode_G_squared_is_N",
                     fock.defect(G1 @ G1, fock.number_ops(one).N, fock.safe_projector(one, 1)), 1e-12))
    return out


def flow_Ia_suite(st: CheckSettings) -> list[Check]:
    out = []
    config = ModeConfig(1, 1, st.cutoff)
    G = dyn.build_G(dyn.SuperchargeSpec(config))
    ev = dyn.SpectralEvolution(G)
    one = np.eye(config.dim)
    P2 = fock.safe_projector(config, 2)
    a, b = fock.annihilator(config, "fermion", 0), fock.annihilator(config, "boson", 0)
    for s in st.s_values:
        U = ev.unitary(s)
        out.append(Check(f"Ia.expm_oracle[s={s:.6g}]", expm_defect(G, s), 1e-9))
        out.append(Check(f"Ia.unitarity[s={s:.6g}]", fock.max_abs(dag(U) @ U - one), 1e-10))
        out.append(Check(f"Ia.group_law[s={s:.6g}]",
                         fock.max_abs(ev.unitary(s) @ ev.unitary(0.5) - ev.unitary(s + 0.5)), 1e-9))
        out.append(Check(f"Ia.closed_form_a[s={s:.6g}]",
                         fock.defect(dyn.heisenberg(a, U), dyn.closed_form_a_s(config, s), P2), 1e-9))
        out.append(Check(f"Ia.closed_form_b[s={s:.6g}]",
                         fock.defect(dyn.heisenberg(b, U), dyn.closed_form_b_s(config, s), P2), 1e-9))
    n = len(st.couplings)
    multi = ModeConfig(n, n, min(st.cutoff, 6), st.couplings)
    out.append(Check("Ia.expm_oracle_multimode", expm_defect(dyn.build_G(dyn.SuperchargeSpec(multi)), 1.0), 1e-9))
    return out


def flow_Ib_suite(st: CheckSettings) -> list[Check]:
    config = ModeConfig(1, 1, st.cutoff)
    G = dyn.build_G(dyn.SuperchargeSpec(config))
    H = G @ G
    a, ad, b, bd = dyn._ops(config)
    d = dyn.odd_derivation
    P = fock.safe_projector(config, 2)
    out = [
        Check("Ib.delta_a_is_b", fock.defect(d(a, True, G), b, P), 1e-12),
        Check("Ib.delta_b_is_minus_i_a", fock.defect(d(b, False, G), -1j * a, P), 1e-12),
    ]
    worst = 0.0
    for X, odd in ((a, True), (ad, True), (b, False), (bd, False)):
        dX = d(X, odd, G)
        worst = max(worst, fock.defect(d(dX, not odd, G), 1j * comm(H, X), P))
    out.append(Check("Ib.delta_squared_is_i_comm_H", worst, 1e-12))
    out.append(Check("Ib.delta_Q_is_H",
                     fock.max_abs(dyn.twisted_leibniz(ad, True, b, False, G) - H), 1e-12))
    out.append(Check("Ib.ode_vs_closed_form",
                     fock.max_abs(dyn.integrate_odd_flow(1.0) - dyn.odd_flow_coefficients(1.0)), 1e-8))
    for s in st.s_values:
        C = dyn.odd_flow_coefficients(s)
        combo = C[:, 0] / dyn.SQRT_I + C[:, 1]
        target = np.exp(s / dyn.SQRT_I) * np.array([1 / dyn.SQRT_I, 1])
        out.append(Check(f"Ib.invariant_combination[s={s:.6g}]", float(np.max(np.abs(combo - target))), 1e-10))
    return out


def consistency_suite(st: CheckSettings) -> list[Check]:
    out = []
    for flow in dyn.FlowKind:
        rep = dyn.consistency_conditions(flow, cutoff=8, margin=2)
        for name, should_hold in dyn.EXPECTED_PATTERN[flow].items():
            value = getattr(rep, name)
            out.append(Check(f"consistency.{flow.value}.{name}", value,
                             1e-10 if should_hold else 0.5, "upper" if should_hold else "lower"))
    return out


def flow_II_suite(st: CheckSettings) -> list[Check]:
    config = ModeConfig(1, 1, min(st.cutoff, 8))
    alg = GradedAlgebra(config)
    G = dyn.build_G(dyn.SuperchargeSpec(config))
    a, ad, b, bd = dyn._ops(config)
    P = fock.safe_projector(config, 1)
    out = []
    for s in st.s_values:
        expected = {
            "a": (a, s * b), "ad": (ad, s * bd), "b": (b, -s * a), "bd": (bd, s * ad),
        }
        for label, X in zip(("a", "ad", "b", "bd"), (a, ad, b, bd)):
            f = alg.grassmann_flow(alg.element(X), G, s)
            body, soul = expected[label]
            out.append(Check(f"II.flow_{label}[s={s:.6g}]",
                             max(fock.defect(f.body, body, P), fock.defect(f.soul, soul, P)), 1e-12))
        U = alg.grassmann_unitary(G, s)
        UU = alg.gmul(alg.gstar(U), U)
        out.append(Check(f"II.graded_unitarity[s={s:.6g}]",
                         max(fock.max_abs(UU.body - np.eye(config.dim)), fock.max_abs(UU.soul)), 1e-12))
        out.append(Check(f"II.body_projection[s={s:.6g}]",
                         fock.max_abs(alg.body_projection(U) - np.eye(config.dim)), 0.0))
    theta, embed = theta_matrix_model(config)
    out.append(Check("II.theta_model.nilpotent", fock.max_abs(theta @ theta), 1e-14))
    out.append(Check("II.theta_model.anticommutes_a",
                     max(fock.max_abs(anticomm(theta, embed(a))), fock.max_abs(anticomm(theta, embed(ad)))), 1e-14))
    out.append(Check("II.theta_model.commutes_b",
                     max(fock.max_abs(comm(theta, embed(b))), fock.max_abs(comm(theta, embed(bd)))), 1e-14))
    return out


def flow_III_suite(st: CheckSettings) -> list[Check]:
    config = dyn.clifford_config(min(st.cutoff, 10))
    ops = dyn.build_clifford(dyn.SuperchargeSpec(config, "clifford"))
    P = fock.safe_projector(config, 1)
    out = [Check("III.G_squared_closed_form", fock.defect(ops.G @ ops.G, ops.G2_closed, P), 1e-12)]
    for s in st.s_values:
        U = dyn._dense(dyn.unitary_III(config, s))
        rows = np.sum(np.abs(U) ** 2, axis=0)
        out.append(Check(f"III.row_probability[s={s:.6g}]", float(np.max(np.abs(rows - 1))), 1e-10))
        # |0,0,n> -> cos(sqrt(n) s)|0,0,n> + i sin(sqrt(n) s)|1,1,n-1> up to JW sign
        worst = 0.0
        for n in range(1, config.boson_cutoff):
            amp = dyn.clifford_action(config, s, 0, 0, n)
            worst = max(worst, abs(amp.get((0, 0, n), 0) - np.cos(np.sqrt(n) * s)),
                        abs(abs(amp.get((1, 1, n - 1), 0)) - abs(np.sin(np.sqrt(n) * s))))
        out.append(Check(f"III.amplitudes[s={s:.6g}]", worst, 1e-10))
    return out


def nmode_suite(st: CheckSettings) -> list[Check]:
    n = len(st.couplings)
    config = ModeConfig(n, n, 9, st.couplings)
    G = dyn.build_G(dyn.SuperchargeSpec(config))
    worst_norm = worst_prob = 0.0
    for s in st.s_values:
        U = dyn._dense(dyn.SpectralEvolution(G).unitary(s))
        for i, state in enumerate(fock.enumerate_basis(config)):
            if max(state.boson_occ) > 8:
                continue
            worst_norm = max(worst_norm, abs(dyn.nmode_norm(config, *state, s) - 1))
            for (fo, bo), amp in dyn.nmode_transitions(config, *state, s).items():
                j = fock.basis_index(config, fo, bo)
                worst_prob = max(worst_prob, abs(abs(U[j, i]) ** 2 - abs(amp) ** 2))
    return [Check("nmode.normalization", worst_norm, 1e-10),
            Check("nmode.transition_probabilities", worst_prob, 1e-10)]


def wz_suite(st: CheckSettings) -> list[Check]:
    config = ModeConfig(1, 1, st.cutoff)
    ops = dyn.build_wz(dyn.SuperchargeSpec(config, "wess_zumino", st.g))
    P = fock.safe_projector(config, 4)
    conv = dyn.wz_convergence(st.g, st.wz_cutoff)
    levels = dyn.wz_spectrum(0.0, st.cutoff)[:-2]
    return [
        Check("wz.anticommutator_is_G_squared", fock.defect(anticomm(ops.Q, ops.Qdag), ops.G @ ops.G, P), 1e-9),
        Check("wz.Q_nilpotent", fock.max_abs(ops.Q @ ops.Q), 1e-12),
        Check("wz.G_commutes_with_H", fock.max_abs(comm(ops.G, ops.H)), 1e-9),
        Check("wz.cutoff_convergence", conv, 1e-8),
        Check("wz.free_limit_integer_spectrum", float(np.max(np.abs(levels - np.round(levels)))), 1e-9),
    ]


def susino_suite(st: CheckSettings) -> list[Check]:
    config = ModeConfig(1, 1, min(st.cutoff, 10))
    G = dyn.build_G(dyn.SuperchargeSpec(config))
    pair = susino.build_susinos(config)
    out = [
        Check("susino.A_plus_eigen", fock.max_abs(comm(pair.A_plus, G) + pair.A_plus), 1e-12),
        Check("susino.A_minus_eigen", fock.max_abs(comm(pair.A_minus, G) - pair.A_minus), 1e-12),
        Check("susino.squares_vanish",
              max(fock.max_abs(pair.A_plus @ pair.A_plus), fock.max_abs(pair.A_minus @ pair.A_minus)), 0.0),
    ]
    stats = susino.statistics_report(pair)
    out.append(Check("susino.not_bosonic", min(stats["commutator_defect_plus"], stats["commutator_defect_minus"]), 0.5, "lower"))
    out.append(Check("susino.not_fermionic",
                     min(stats["anticommutator_defect_plus"], stats["anticommutator_defect_minus"]), 0.5, "lower"))
    expected = {"A+": 1, "A-": -1, "A+^ A+": 0, "A-^ A-": 0, "A-^ A+": 2, "A+^ A-": -2}
    for s in (0.3, 1.0):
        ph = susino.exciton_phases(pair, G, s)
        worst = max(abs(ph[k]["modulus"] * np.exp(1j * ph[k]["gamma"] * s) - np.exp(1j * g * s)) + ph[k]["residual"]
                    for k, g in expected.items())
        out.append(Check(f"susino.phase_laws[s={s:.6g}]", worst, 1e-10))
    worst = 0.0
    for m in (1, 2, 3):
        for n in (1, 2, 3):
            for sign in (+1, -1):
                A = susino.build_A_mn(config, m, n, sign)
                Y = dyn.heisenberg(A, dyn.SpectralEvolution(G).unitary(0.7))
                target = np.exp(sign * 1j * 0.7 * (np.sqrt(n) - np.sqrt(m))) * A
                worst = max(worst, fock.max_abs(Y - target))
    out.append(Check("susino.A_mn_phase_laws", worst, 1e-10))
    rep = susino.perturbed_evolution(config, 0.5, 1.0)
    out.append(Check("susino.H_alpha_square", rep["identity_defect"], 1e-12))
    return out


def entanglement_suite(st: CheckSettings) -> list[Check]:
    config = ModeConfig(1, 1, 9)
    worst = 0.0
    for n in range(1, 9):
        for v in ent.single_mode_eigenvectors(config, n):
            for keep in ("fermions", "bosons"):
                worst = max(worst, abs(ent.entropy(ent.reduce(v, config, keep)) - ent.LN2))
    out = [Check("entanglement.lemma_ln2", worst, 1e-10)]
    out.append(Check("entanglement.A_equals_iB",
                     max(abs(ent.brute_force_entropy(ent.TwoModeParams.from_mixing(kb, np.pi / 4, np.pi / 2)) - 2 * ent.LN2)
                         for kb in ent.KBAR_GRID), 1e-10))
    phis = ent.phi_grid(4096)
    out.append(Check("entanglement.min_kbar0", abs(ent.mixing_entropy(0.0, phis).min() - ent.LN2), 1e-6))
    out.append(Check("entanglement.min_kbar1", abs(ent.mixing_entropy(1.0, phis).min() - 1.5 * ent.LN2), 1e-6))
    rng = np.random.default_rng(st.seed)
    worst = 0.0
    for _ in range(100):
        z = rng.normal(size=4)
        A, B = complex(z[0], z[1]), complex(z[2], z[3])
        r = np.hypot(abs(A), abs(B))
        p = ent.TwoModeParams(int(rng.integers(0, 3)), int(rng.integers(0, 3)), float(rng.uniform(0, 2)), A / r, B / r)
        state, cfg = ent.susino_state(p)
        spec_bf = np.sort(np.linalg.eigvalsh(ent.reduce(state, cfg, "fermions")))
        spec_cf = np.sort(ent.density_eigenvalues_closed_form(p.A, p.B, p.kbar))
        worst = max(worst, float(np.max(np.abs(spec_bf - spec_cf))))
    out.append(Check("entanglement.closed_form_eigenvalues", worst, 1e-10))
    worst = 0.0
    for kb in ent.KBAR_GRID:
        r = ent.extremum_solve(kb)
        worst = max([worst] + [abs(d) for d in r.derivative])
    out.append(Check("entanglement.extremum_stationary", worst, 1e-6))
    return out


def thermal_suite(st: CheckSettings) -> list[Check]:
    out = []
    for x in (1.5, 2.0, np.e):
        rep = thermal.mode_occupation_check(float(np.log(x)), st.thermal_cutoff)
        out.append(Check(f"thermal.occupations[x={x:.6g}]", max(rep["errors"].values()), rep["tolerance"]))
    for beta in st.betas:
        tol = thermal.ThermalParams(beta, st.thermal_cutoff).tolerance
        for s in st.s_values:
            inv = thermal.ia_invariance(beta, s, st.thermal_cutoff)
            tag = f"[beta={beta:.6g},s={s:.6g}]"
            out.append(Check(f"thermal.Ia_invariance{tag}", inv["invariance_defect"], max(tol, 1e-12)))
            out.append(Check(f"thermal.intermediate_expectations{tag}",
                             max(inv["omega_comm_nf_G"], inv["omega_G_comm_nf_G"], inv["omega_comm_G_GA"]), 1e-10))
            dr = thermal.ib_drift(beta, s, st.thermal_cutoff)
            out.append(Check(f"thermal.Ib_drift{tag}",
                             max(abs(dr["first_order"] - dr["exact"]), abs(dr["all_orders"] - dr["exact"])),
                             dr["tolerance"]))
    out.append(Check("thermal.kms", thermal.kms_defect(0.7, seed=st.seed), 1e-8))
    return out


SUITES: dict[str, Callable[[CheckSettings], list[Check]]] = {
    "fock": fock_suite,
    "Ia": flow_Ia_suite,
    "Ib": flow_Ib_suite,
    "consistency": consistency_suite,
    "II": flow_II_suite,
    "III": flow_III_suite,
    "nmode": nmode_suite,
    "wz": wz_suite,
    "susino": susino_suite,
    "entanglement": entanglement_suite,
    "thermal": thermal_suite,
}


def run_checks(settings: CheckSettings, suites: Iterable[str] | None = None,
               tol_override: float | None = None) -> list[Check]:
    """Run the named suites; ``tol_override`` replaces every upper-bound tolerance."""
    results = []
    for name in suites or SUITES:
        for c in SUITES[name](settings):
            if tol_override is not None and c.kind == "upper":
                c = Check(c.name, c.defect, tol_override, c.kind)
            results.append(c)
    return results
