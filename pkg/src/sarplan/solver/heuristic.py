"""Greedy construction and hill-climbing for warm starts.

Both score plans by clamped coverage minus directive penalties, using the
same per-meter weights as the MIP objective. Hard directives are scored with
their weight scaled by ``HARD_FACTOR`` so the search steers away from them;
any violation left over is reported by the caller, not hidden.
"""
from __future__ import annotations

import time
from typing import Sequence

import numpy as np

from ..directives import Directive, weight_of
from ..environment import Scenario, check_scenario
from ..errors import InputError
from ..plan import MissionPlan, check_mission, plan_from_timeline, timeline_of
from .lp import SolverConfig

HARD_FACTOR = 1000.0
_EPS = 1e-12


class Scorer:
    """Fast objective over per-agent timelines of sector indices."""

    def __init__(self, scenario: Scenario, directives: Sequence[Directive] = ()):
        self.sc = scenario
        self.T = scenario.time.budget_T
        self.ids = scenario.agent_ids
        self.k_of = {a: k for k, a in enumerate(self.ids)}
        self.eff = [scenario.efficacy(a) for a in self.ids]
        self.sectors = [scenario.sectors_of(a) for a in self.ids]
        self.pos = [{s: i for i, s in enumerate(secs)} for secs in self.sectors]
        self.succ = [[[self.pos[k][t] for t in scenario.successors(a)[s]] for s in self.sectors[k]]
                     for k, a in enumerate(self.ids)]
        self.start = [[self.pos[k][s] for s in scenario.agent(a).start_sectors]
                      for k, a in enumerate(self.ids)]
        self.c0 = scenario.coverage_map
        self.dirs = []
        for d in directives:
            d.check_agents(self.ids)
            mask = np.zeros(self.T, dtype=bool)
            mask[d.active_steps(self.T)] = True
            w = weight_of(d, scenario) * (1.0 if d.mode == "soft" else HARD_FACTOR)
            pairs = [(self.k_of[a], self.k_of[b], scenario.distances(a, b))
                     for a in d.group_a for b in d.group_b]
            self.dirs.append((d, mask, w, pairs))
        self.involves = [[n for n, (_, _, _, pairs) in enumerate(self.dirs)
                          if any(k in (p[0], p[1]) for p in pairs)] for k in range(len(self.ids))]

    # -- coverage ---------------------------------------------------------
    def contribution(self, k: int, line: np.ndarray) -> np.ndarray:
        counts = np.bincount(line, minlength=len(self.sectors[k]))
        return counts @ self.eff[k]

    def coverage(self, raw: np.ndarray) -> float:
        return float(np.minimum(self.c0, raw).sum())

    # -- directives -------------------------------------------------------
    def directive_penalty(self, n: int, lines, steps=None) -> float:
        d, mask, w, pairs = self.dirs[n]
        sel = mask if steps is None else mask & steps
        if not sel.any():
            return 0.0
        dist = np.array([psi[lines[ka][sel], lines[kb][sel]] for ka, kb, psi in pairs])
        v = d.hinge(dist.min(axis=0), dist.max(axis=0))
        return w * float(v.sum())

    def penalty(self, lines, only=None) -> float:
        ns = range(len(self.dirs)) if only is None else only
        return sum(self.directive_penalty(n, lines) for n in ns)

    # -- conversions ------------------------------------------------------
    def lines_of(self, mission: MissionPlan) -> list[np.ndarray]:
        return [np.array([self.pos[k][s] for s in timeline_of(mission[a], self.T)])
                for k, a in enumerate(self.ids)]

    def mission_of(self, lines) -> MissionPlan:
        return MissionPlan.of(plan_from_timeline(a, [self.sectors[k][i] for i in lines[k]])
                              for k, a in enumerate(self.ids))

    def objective(self, lines) -> float:
        raw = sum(self.contribution(k, ln) for k, ln in enumerate(lines))
        return self.coverage(raw) - self.penalty(lines)


def _pick(scores: np.ndarray, rng) -> int:
    best = scores.max()
    ties = np.flatnonzero(scores >= best - 1e-12)
    return int(ties[0] if len(ties) == 1 else rng.choice(ties))


def _penalty_vec(sc: Scorer, k: int, positions, tau: int) -> np.ndarray | float:
    """Penalty at step tau for every sector agent k could occupy.

    ``positions[l]`` is agent l's sector index at tau, or None if unknown;
    pairs with an unknown end are left out.
    """
    total = 0.0
    for n in sc.involves[k]:
        d, mask, w, pairs = sc.dirs[n]
        if not mask[tau]:
            continue
        var, fixed = [], []
        for ka, kb, psi in pairs:
            if ka == k and positions[kb] is not None:
                var.append(psi[:, positions[kb]])
            elif kb == k and positions[ka] is not None:
                var.append(psi[positions[ka], :])
            elif ka != k and kb != k and positions[ka] is not None and positions[kb] is not None:
                fixed.append(psi[positions[ka], positions[kb]])
        if not var:
            continue
        v = np.array(var)
        lo, hi = v.min(axis=0), v.max(axis=0)
        if fixed:
            lo, hi = np.minimum(lo, min(fixed)), np.maximum(hi, max(fixed))
        total = total + w * d.hinge(lo, hi)
    return total


def _options(sc: Scorer, k: int, prev, visited) -> list[int]:
    if prev is None:
        return list(sc.start[k])
    return [prev] + [s for s in sc.succ[k][prev] if s not in visited]


def _greedy_fill(sc: Scorer, k: int, lines, raw, start_tau: int, rng, noise: float = 0.0):
    """Re-plan agent k from step ``start_tau`` on, keeping the earlier steps.

    Each step takes the option maximizing its own net gain plus the best net
    gain one step further, with the other agents' timelines held fixed.
    ``raw`` holds every contribution except agent k's steps from start_tau on.
    With ``noise`` > 0 a uniformly random option replaces the best one with
    that probability.
    """
    line = lines[k].copy()
    visited = set(line[:start_tau].tolist())
    raw = raw.copy()
    others = [l for l in range(len(lines)) if l != k]
    eff, c0 = sc.eff[k], sc.c0
    for tau in range(start_tau, sc.T):
        prev = int(line[tau - 1]) if tau > 0 else None
        opts = _options(sc, k, prev, visited)
        base = np.minimum(c0, raw).sum()
        pos = [None] * len(lines)
        for l in others:
            pos[l] = int(lines[l][tau])
        pen = _penalty_vec(sc, k, pos, tau)
        score = np.minimum(c0, raw + eff[opts]).sum(axis=1) - base
        if not np.isscalar(pen):
            score = score - pen[opts]
        if tau + 1 < sc.T:
            pos1 = [None] * len(lines)
            for l in others:
                pos1[l] = int(lines[l][tau + 1])
            pen1 = _penalty_vec(sc, k, pos1, tau + 1)
            for o, s in enumerate(opts):
                nxt = _options(sc, k, s, visited | {s})
                r1 = raw + eff[s]
                g = np.minimum(c0, r1 + eff[nxt]).sum(axis=1) - np.minimum(c0, r1).sum()
                if not np.isscalar(pen1):
                    g = g - pen1[nxt]
                score[o] += g.max()
        if noise > 0 and rng.random() < noise:
            choice = opts[int(rng.integers(len(opts)))]
        else:
            choice = opts[_pick(score, rng)]
        line[tau] = choice
        visited.add(choice)
        raw += eff[choice]
    return line


def heuristic_construct(scenario: Scenario, directives: Sequence[Directive] = (),
                        rng_seed: int = 0) -> MissionPlan:
    """Round-robin greedy: each agent in turn takes one interval, staying or moving
    to an unvisited neighbor, whichever adds most coverage net of penalties."""
    for a in scenario.agents:
        if not a.start_sectors:
            raise InputError(f"agent {a.id!r} has an empty start-sector set")
    check_scenario(scenario)
    sc = Scorer(scenario, directives)
    rng = np.random.default_rng(rng_seed)
    K, T = len(sc.ids), sc.T
    lines = [np.zeros(T, dtype=np.int64) for _ in range(K)]
    visited = [set() for _ in range(K)]
    raw = np.zeros(scenario.grid.n_cells)
    for tau in range(T):
        for k in range(K):
            prev = int(lines[k][tau - 1]) if tau > 0 else None
            opts = _options(sc, k, prev, visited[k])
            gains = (np.minimum(sc.c0, raw + sc.eff[k][opts]).sum(axis=1)
                     - np.minimum(sc.c0, raw).sum())
            # agents already placed this step count where they are now,
            # the rest where they were one step earlier
            pos = [int(lines[l][tau]) if l < k else (int(lines[l][tau - 1]) if tau > 0 else None)
                   for l in range(K)]
            pen = _penalty_vec(sc, k, pos, tau)
            if not np.isscalar(pen):
                gains = gains - pen[opts]
            choice = opts[_pick(gains, rng)]
            lines[k][tau] = choice
            visited[k].add(choice)
            raw += sc.eff[k][choice]
    mission = sc.mission_of(lines)
    check_mission(mission, scenario)
    return mission


def _moves(sc: Scorer, k: int, line: np.ndarray):
    """Candidate timelines for agent k, in a fixed order."""
    T = sc.T
    path, runs = [], []
    for s in line.tolist():
        if path and path[-1] == s:
            runs[-1] += 1
        else:
            path.append(s)
            runs.append(1)

    def build(p, r):
        return np.repeat(np.array(p, dtype=np.int64), r)

    # shift one interval between neighbouring tasks
    for i in range(len(path) - 1):
        for src, dst in ((i, i + 1), (i + 1, i)):
            if runs[src] > 1:
                r = list(runs)
                r[src] -= 1
                r[dst] += 1
                yield build(path, r)
    # swap two tasks
    for i in range(len(path)):
        for j in range(i + 1, len(path)):
            p = list(path)
            p[i], p[j] = p[j], p[i]
            if p[0] not in sc.start[k]:
                continue
            if all(p[q + 1] in sc.succ[k][p[q]] for q in range(len(p) - 1)):
                yield build(p, runs)
    # re-route the tail after each prefix (cut 0 re-routes everything)
    ends = np.cumsum(runs)
    for cut in [0] + [int(e) for e in ends[:-1]] + [int(e) - 1 for e in ends if e - 1 > 0]:
        if 0 <= cut < T:
            yield ("tail", cut)


class _State:
    """Timelines with cached contributions and penalties."""

    def __init__(self, sc: Scorer, lines):
        self.sc = sc
        self.lines = [np.array(l, dtype=np.int64) for l in lines]
        self.contrib = [sc.contribution(k, ln) for k, ln in enumerate(self.lines)]
        self.raw = sum(self.contrib)
        self.pen = [sc.directive_penalty(n, self.lines) for n in range(len(sc.dirs))]
        self.score = sc.coverage(self.raw) - sum(self.pen)

    def trial(self, k: int, line):
        sc = self.sc
        new_c = sc.contribution(k, line)
        raw = self.raw - self.contrib[k] + new_c
        lines = list(self.lines)
        lines[k] = line
        pen = list(self.pen)
        for n in sc.involves[k]:
            pen[n] = sc.directive_penalty(n, lines)
        return sc.coverage(raw) - sum(pen), (lines, new_c, raw, pen)

    def accept(self, k: int, score, parts):
        self.lines, new_c, self.raw, self.pen = parts
        self.contrib[k] = new_c
        self.score = score

    def reroute(self, k: int, cut: int, rng, noise: float = 0.0):
        prefix = self.sc.contribution(k, self.lines[k][:cut]) if cut else 0.0
        raw = self.raw - self.contrib[k] + prefix
        return _greedy_fill(self.sc, k, self.lines, raw, cut, rng, noise)


def _climb(st: _State, rng, deadline: float) -> None:
    improved = True
    while improved and time.perf_counter() < deadline:
        improved = False
        for k in range(len(st.lines)):
            for cand in _moves(st.sc, k, st.lines[k]):
                if time.perf_counter() >= deadline:
                    return
                if isinstance(cand, tuple):
                    cand = st.reroute(k, cand[1], rng)
                if np.array_equal(cand, st.lines[k]):
                    continue
                score, parts = st.trial(k, cand)
                if score > st.score + _EPS * (1 + abs(st.score)):
                    st.accept(k, score, parts)
                    improved = True
                    break


def local_search(plan: MissionPlan, scenario: Scenario, directives: Sequence[Directive] = (),
                 config: SolverConfig | None = None) -> MissionPlan:
    """First-improvement hill climbing; returns a plan scoring at least as well."""
    config = config or SolverConfig()
    check_mission(plan, scenario)
    sc = Scorer(scenario, directives)
    rng = np.random.default_rng(config.rng_seed)
    st = _State(sc, sc.lines_of(plan))
    _climb(st, rng, time.perf_counter() + config.time_limit_s)
    mission = sc.mission_of(st.lines)
    check_mission(mission, scenario)
    return mission


def heuristic_plan(scenario: Scenario, directives: Sequence[Directive] = (),
                   config: SolverConfig | None = None, rounds: int = 200) -> MissionPlan:
    """Construction, hill climbing, then ``rounds`` of perturb-and-climb.

    A perturbation re-routes a random agent from a random step with a noisy
    greedy. The best plan seen is kept. The round count, not the clock,
    bounds the work, so results repeat exactly for a seed unless the time
    limit cuts the search short.
    """
    config = config or SolverConfig()
    deadline = time.perf_counter() + config.time_limit_s
    start = heuristic_construct(scenario, directives, config.rng_seed)
    sc = Scorer(scenario, directives)
    rng = np.random.default_rng(config.rng_seed)
    st = _State(sc, sc.lines_of(start))
    _climb(st, rng, deadline)
    best_lines, best = list(st.lines), st.score
    for _ in range(rounds):
        if time.perf_counter() >= deadline:
            break
        k = int(rng.integers(len(st.lines)))
        cut = int(rng.integers(sc.T))
        line = st.reroute(k, cut, rng, noise=0.3)
        score, parts = st.trial(k, line)
        st.accept(k, score, parts)
        _climb(st, rng, deadline)
        if st.score > best + _EPS * (1 + abs(best)):
            best_lines, best = list(st.lines), st.score
        elif st.score < best - _EPS * (1 + abs(best)):
            st = _State(sc, best_lines)
    mission = sc.mission_of(best_lines)
    check_mission(mission, scenario)
    return mission
