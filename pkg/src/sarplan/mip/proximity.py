"""Time-indexed occupancy and proximity-directive rows.

Occupancy binaries z[k, i, s] say agent k is in sector i during interval s
(1-based here, matching arrival times; directive steps are 0-based). Two big-M
rows per (i, k, s) force z = 1 only inside [t_ik, t_ik + w_ik), and the count
row sum_s z = w_ik fills that window completely.

Directive slack u[step] is the violation in meters:
  coalition / interference avoidance: one row per occupied sector pair that
    breaks the limit, u >= gap * (z_ik + z_jl - 1);
  network / sparsity: pair distances d_kl = sum psi_ij q_ij with q the exact
    product of two one-hot occupancy rows, and a selector over agent pairs
    picking the closest (network) or farthest (sparsity) one.
"""
from __future__ import annotations

from ..directives import Directive, weight_of
from ..environment import Scenario
from ..errors import InputError
from .model import MipModel


def attach_occupancy(model: MipModel, scenario: Scenario) -> MipModel:
    if model.tags.get("occupancy"):
        return model
    m = model.copy()
    T = m.tags["budget_T"]
    M = T + 1
    z = m.tags.setdefault("z", {})
    for k, agent in enumerate(scenario.agents):
        aid = agent.id
        sectors = scenario.sectors_of(aid)
        for i, sec in enumerate(sectors):
            for s in range(1, T + 1):
                z[(aid, sec, s - 1)] = m.add_var(f"z_{k}_{i}_{s}", "binary", role=("z", aid, sec, s - 1))
        for s in range(1, T + 1):
            m.add_row(f"occ_{k}_{s}", {z[(aid, sec, s - 1)]: 1.0 for sec in sectors}, "=", 1)
        for i, sec in enumerate(sectors):
            t, w = m.tags["t"][aid][sec], m.tags["w"][aid][sec]
            terms = {z[(aid, sec, s - 1)]: 1.0 for s in range(1, T + 1)}
            terms[w] = -1.0
            m.add_row(f"count_{k}_{i}", terms, "=", 0)
            for s in range(1, T + 1):
                zz = z[(aid, sec, s - 1)]
                # z = 1  =>  t <= s
                m.add_row(f"zlo_{k}_{i}_{s}", {t: 1.0, zz: float(M)}, "<=", s + M)
                # z = 1  =>  t + w >= s + 1
                m.add_row(f"zhi_{k}_{i}_{s}", {t: 1.0, w: 1.0, zz: -float(M)}, ">=", s + 1 - M)
    m.tags["occupancy"] = True
    return m


def attach_directive(model: MipModel, scenario: Scenario, directive: Directive) -> MipModel:
    directive.check_agents(scenario.agent_ids)
    if not model.tags.get("occupancy"):
        model = attach_occupancy(model, scenario)
    m = model.copy()
    T = m.tags["budget_T"]
    steps = directive.active_steps(T)
    n = len(m.tags["directives"])
    m.tags["directives"] = m.tags["directives"] + [directive]
    lam = weight_of(directive, scenario)
    soft = directive.mode == "soft"
    z = m.tags["z"]
    D = float(directive.limit_m)
    pairs = [(a, b) for a in directive.group_a for b in directive.group_b]
    u_cols = []
    for tau in steps:
        u = m.add_var(f"u_{n}_{tau}", "continuous", 0.0, float("inf") if soft else 0.0,
                      role=("u", n, tau), obj=-lam if soft else 0.0)
        u_cols.append(u)
        if directive.kind in ("coalition", "interference_avoidance"):
            _hinge_rows(m, scenario, directive, n, tau, u, pairs, z, D)
        else:
            _selector_rows(m, scenario, directive, n, tau, u, pairs, z, D)
    m.tags.setdefault("u", {})[n] = u_cols
    return m


def _hinge_rows(m, scenario, directive, n, tau, u, pairs, z, D):
    upper = directive.kind == "coalition"
    for a, b in pairs:
        psi = scenario.distances(a, b)
        sa, sb = scenario.sectors_of(a), scenario.sectors_of(b)
        ka, kb = scenario.agent_index(a), scenario.agent_index(b)
        for i, si in enumerate(sa):
            for j, sj in enumerate(sb):
                gap = psi[i, j] - D if upper else D - psi[i, j]
                if gap <= 0:
                    continue
                za, zb = z[(a, si, tau)], z[(b, sj, tau)]
                m.add_row(f"dir_{n}_{tau}_{ka}_{i}_{kb}_{j}",
                          {u: 1.0, za: -gap, zb: -gap}, ">=", -gap)


def _selector_rows(m, scenario, directive, n, tau, u, pairs, z, D):
    network = directive.kind == "network"
    dist_terms = []
    for a, b in pairs:
        psi = scenario.distances(a, b)
        sa, sb = scenario.sectors_of(a), scenario.sectors_of(b)
        ka, kb = scenario.agent_index(a), scenario.agent_index(b)
        q = {}
        for i, si in enumerate(sa):
            for j, sj in enumerate(sb):
                q[i, j] = m.add_var(f"q_{n}_{tau}_{ka}_{i}_{kb}_{j}", "continuous", 0.0, 1.0,
                                    role=("q", n, tau, a, si, b, sj))
        for i, si in enumerate(sa):
            terms = {q[i, j]: 1.0 for j in range(len(sb))}
            terms[z[(a, si, tau)]] = -1.0
            m.add_row(f"qa_{n}_{tau}_{ka}_{kb}_{i}", terms, "=", 0)
        for j, sj in enumerate(sb):
            terms = {q[i, j]: 1.0 for i in range(len(sa))}
            terms[z[(b, sj, tau)]] = -1.0
            m.add_row(f"qb_{n}_{tau}_{ka}_{kb}_{j}", terms, "=", 0)
        dist_terms.append((ka, kb, {q[i, j]: float(psi[i, j]) for (i, j) in q}, psi))

    if len(dist_terms) == 1:
        ka, kb, d, psi = dist_terms[0]
        if network:  # u >= d - D
            m.add_row(f"dir_{n}_{tau}", {u: 1.0, **{c: -v for c, v in d.items()}}, ">=", -D)
        else:  # u >= D - d
            m.add_row(f"dir_{n}_{tau}", {u: 1.0, **d}, ">=", D)
        return

    sel = []
    for ka, kb, d, psi in dist_terms:
        sigma = m.add_var(f"sig_{n}_{tau}_{ka}_{kb}", "binary", role=("sigma", n, tau, ka, kb))
        sel.append(sigma)
        if network:
            big = max(float(psi.max()) - D, 0.0)
            m.add_row(f"dir_{n}_{tau}_{ka}_{kb}",
                      {u: 1.0, **{c: -v for c, v in d.items()}, sigma: -big}, ">=", -D - big)
        else:
            big = max(D - float(psi.min()), 0.0)
            m.add_row(f"dir_{n}_{tau}_{ka}_{kb}", {u: 1.0, **d, sigma: big}, ">=", D + big)
    m.add_row(f"pick_{n}_{tau}", {s: 1.0 for s in sel}, "=", 1)


def build_model(scenario: Scenario, directives=(), with_occupancy: bool = False) -> MipModel:
    """Core model plus occupancy (when needed or requested) and every directive."""
    from .core import build_core

    model = build_core(scenario)
    if directives or with_occupancy:
        model = attach_occupancy(model, scenario)
    for d in directives:
        if not isinstance(d, Directive):
            raise InputError(f"not a directive: {d!r}")
        model = attach_directive(model, scenario, d)
    return model
