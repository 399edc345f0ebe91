"""Orbit enumeration for orthoplicial Apollonian packings.

Two engines share one expansion rule (view a configuration as four
disjoint pairs; a move keeps one sphere per pair and replaces the rest):

* bend mode works on integer bend vectors with numpy and canonicalizes
  states under the symmetry group, which keeps the visited set small;
* geometric mode walks exact F-matrices and keeps every sphere.

A child is enqueued only when the smallest bend it creates is at most
the cap.  Soundness of that prune is empirical: the suite checks mode
agreement, monotone closure, and reproduction of the frozen reference bend
sets rather than assuming a termination argument.

Both engines are single-threaded and fully deterministic; reports emit
every collection sorted, so identical runs are byte-identical.
"""

from __future__ import annotations

import itertools
import json
import os
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Set, Tuple

import numpy as np

from .arithmetic import ObstructionClass, epsilon_of
from .config import BendVector, FMatrix
from .inversive import Coord5, HonestSphere, sphere_from_coords
from .ring import QSqrt2

DEFAULT_BUDGET = 10 ** 7
DEFAULT_BOX = Fraction(10)

_MASKS = tuple(itertools.product((0, 1), repeat=4))
_MASKS_NP = np.array(_MASKS, dtype=np.int64).astype(bool)


class CapBelowSeedError(ValueError):
    """The cap excludes even the largest sphere of the seed."""


@dataclass(frozen=True)
class PackingSpec:
    seed: FMatrix
    bend_cap: int
    mode: str = "bend"  # "bend" or "geom"
    budget: int = DEFAULT_BUDGET
    box_limit: Fraction = DEFAULT_BOX

    def __post_init__(self):
        if self.mode not in ("bend", "geom"):
            raise ValueError("mode must be 'bend' or 'geom'")


@dataclass(frozen=True)
class PackingReport:
    """Outcome of one orbit walk.

    ``bends`` is the sorted set of bend values found at or below the cap.
    ``bend_multiplicity`` counts distinct spheres per bend in geometric
    mode; in bend mode sphere identity is not recoverable, so it counts
    occurrences across the deduped states instead.
    """

    mode: str
    bend_cap: int
    bends: Tuple[int, ...]
    bend_multiplicity: Dict[int, int]
    classification: str
    epsilon: int
    frontier_exhausted: bool
    states: int
    spheres: Optional[Tuple[Coord5, ...]] = None

    @property
    def min_bend(self) -> int:
        return self.bends[0] if self.bends else 0

    def obstruction(self) -> ObstructionClass:
        return ObstructionClass(self.epsilon)

    def to_json_dict(self) -> dict:
        out = {
            "schema_version": 1,
            "mode": self.mode,
            "bend_cap": self.bend_cap,
            "epsilon": self.epsilon,
            "forbidden_residue": self.obstruction().forbidden_residue,
            "classification": self.classification,
            "frontier_exhausted": self.frontier_exhausted,
            "states": self.states,
            "bends": list(self.bends),
            "bend_multiplicity": {str(k): v for k, v in
                                  sorted(self.bend_multiplicity.items())},
        }
        if self.spheres is not None:
            out["sphere_count"] = len(self.spheres)
        return out


def _seed_bend_vector(seed: FMatrix) -> BendVector:
    bv = seed.bend_vector()
    if not bv.is_integral():
        raise ValueError("orbit enumeration needs an integral seed")
    return bv


def _classify(zero_spheres: int, negative_values: Set[int]) -> str:
    if len(negative_values) == 1 and zero_spheres == 0:
        return "bounded"
    if zero_spheres == 2 and not negative_values:
        return "planar"
    if zero_spheres == 1 and not negative_values:
        return "half_space"
    return "full_space"


def generate(spec: PackingSpec) -> PackingReport:
    bv = _seed_bend_vector(spec.seed)
    bends8 = [int(b) for b in bv.bends8()]
    if spec.bend_cap < min(bends8):
        raise CapBelowSeedError(
            f"cap {spec.bend_cap} is below every seed bend (min {min(bends8)})"
        )
    eps = epsilon_of(bends8).epsilon
    if spec.mode == "bend":
        report = _generate_bend(spec, bv, eps)
    else:
        report = _generate_geom(spec, eps)
    forbidden = (-eps) % 4
    bad = [b for b in report.bends if b % 4 == forbidden]
    if bad:
        raise RuntimeError(f"local obstruction violated by bends {bad}")
    return report


# ---------------------------------------------------------------------------
# bend mode


def _canon_states(lo: np.ndarray, mu: np.ndarray) -> np.ndarray:
    return np.concatenate([np.sort(lo, axis=1), mu[:, None]], axis=1)


def _generate_bend(spec: PackingSpec, bv: BendVector, eps: int) -> PackingReport:
    cap = spec.bend_cap
    b = np.array(bv.as_ints(), dtype=np.int64)
    lo = np.minimum(b[:4], 2 * b[4] - b[:4])
    frontier = _canon_states(lo[None, :], b[4:5])
    visited = {frontier[0].tobytes()}

    mult: Counter = Counter()
    bend_values: Set[int] = set()
    max_zero_in_state = 0
    exhausted = True

    def collect(states: np.ndarray):
        nonlocal max_zero_in_state
        los = states[:, :4]
        his = 2 * states[:, 4:5] - los
        all8 = np.concatenate([los, his], axis=1)
        zeros = int((all8 == 0).sum(axis=1).max(initial=0))
        max_zero_in_state = max(max_zero_in_state, zeros)
        vals = all8.ravel()
        vals = vals[vals <= cap]
        uniq, counts = np.unique(vals, return_counts=True)
        for v, c in zip(uniq.tolist(), counts.tolist()):
            mult[v] += c
        bend_values.update(uniq.tolist())

    collect(frontier)
    nstates = 1
    while len(frontier):
        L = frontier[:, :4]
        M = frontier[:, 4]
        H = 2 * M[:, None] - L
        batches = []
        for mask in _MASKS_NP:
            kept = np.where(mask, H, L)
            mu2 = kept.sum(axis=1) - M
            new = 2 * mu2[:, None] - kept
            ok = new.min(axis=1) <= cap
            if not ok.any():
                continue
            batches.append(_canon_states(
                np.minimum(kept[ok], new[ok]), mu2[ok]))
        if not batches:
            break
        children = np.unique(np.concatenate(batches), axis=0)
        fresh = []
        for row in children:
            key = row.tobytes()
            if key not in visited:
                visited.add(key)
                fresh.append(row)
        if not fresh:
            break
        frontier = np.stack(fresh)
        nstates += len(fresh)
        collect(frontier)
        if nstates > spec.budget:
            exhausted = False
            break

    bends = tuple(sorted(bend_values))
    negatives = {v for v in bends if v < 0}
    zero_spheres = max_zero_in_state if 0 in bend_values else 0
    return PackingReport(
        mode="bend",
        bend_cap=cap,
        bends=bends,
        bend_multiplicity=dict(sorted(mult.items())),
        classification=_classify(zero_spheres, negatives),
        epsilon=eps,
        frontier_exhausted=exhausted,
        states=nstates,
    )


# ---------------------------------------------------------------------------
# geometric mode


def _pair_key(a: Coord5, b: Coord5) -> Tuple:
    ka, kb = a.serialize(), b.serialize()
    return (ka, kb) if ka <= kb else (kb, ka)


def _canon_geom(rows: Sequence[Coord5], mu: Coord5) -> Tuple:
    pairs = sorted(_pair_key(r, mu.scale(2) - r) for r in rows)
    return (tuple(pairs), mu.serialize())


def _in_box(v: Coord5, limit: Fraction) -> bool:
    if not v.b:
        return True
    lim = QSqrt2(limit)
    bound = lim * abs(v.b)
    return all(abs(c) <= bound for c in (v.xhat, v.yhat, v.zhat))


def _generate_geom(spec: PackingSpec, eps: int) -> PackingReport:
    cap = QSqrt2(spec.bend_cap)
    seed_rows = tuple(spec.seed.rows[:4])
    seed_mu = spec.seed.antipodal_row
    visited = {_canon_geom(seed_rows, seed_mu)}
    spheres: Dict[Tuple, Coord5] = {}

    def collect(rows, mu):
        for r in rows:
            for v in (r, mu.scale(2) - r):
                spheres.setdefault(v.serialize(), v)

    collect(seed_rows, seed_mu)
    frontier = [(seed_rows, seed_mu)]
    nstates = 1
    exhausted = True
    while frontier:
        nxt = []
        for rows, mu in frontier:
            two_mu = mu.scale(2)
            his = [two_mu - r for r in rows]
            for mask in _MASKS:
                kept = [his[k] if mask[k] else rows[k] for k in range(4)]
                mu2 = kept[0] + kept[1] + kept[2] + kept[3] - mu
                two_mu2 = mu2.scale(2)
                new = [two_mu2 - c for c in kept]
                if all(n.b > cap for n in new):
                    continue
                if not any(_in_box(n, spec.box_limit) for n in new):
                    continue
                key = _canon_geom(kept, mu2)
                if key in visited:
                    continue
                visited.add(key)
                collect(kept, mu2)
                nxt.append((tuple(kept), mu2))
                nstates += 1
                if nstates > spec.budget:
                    exhausted = False
                    break
            if not exhausted:
                break
        if not exhausted:
            break
        frontier = nxt

    kept_spheres = tuple(
        v for _, v in sorted(spheres.items()) if v.b <= cap
    )
    bend_list = []
    for v in kept_spheres:
        b = v.b
        if b.irr != 0 or b.rat.denominator != 1:
            raise ValueError("non-integral bend in geometric orbit")
        bend_list.append(int(b.rat))
    mult = Counter(bend_list)
    zero_spheres = mult.get(0, 0)
    negatives = {b for b in mult if b < 0}
    return PackingReport(
        mode="geom",
        bend_cap=spec.bend_cap,
        bends=tuple(sorted(mult)),
        bend_multiplicity=dict(sorted(mult.items())),
        classification=_classify(zero_spheres, negatives),
        epsilon=eps,
        frontier_exhausted=exhausted,
        states=nstates,
        spheres=kept_spheres,
    )


def orbit_bend_vectors(seed: FMatrix, cap: int,
                       budget: int = DEFAULT_BUDGET) -> List[BendVector]:
    """Canonical bend vectors of every configuration the bend-mode walk
    visits at this cap.  Each is a genuine bend vector of a reordered
    configuration: picking one sphere per disjoint pair is admissible."""
    bv = _seed_bend_vector(seed)
    b = bv.as_ints()
    lo = tuple(sorted(min(b[k], 2 * b[4] - b[k]) for k in range(4)))
    start = lo + (b[4],)
    visited = {start}
    frontier = [start]
    while frontier:
        nxt = []
        for state in frontier:
            los, mu = state[:4], state[4]
            his = tuple(2 * mu - x for x in los)
            for mask in _MASKS:
                kept = tuple(his[k] if mask[k] else los[k] for k in range(4))
                mu2 = sum(kept) - mu
                new = tuple(2 * mu2 - c for c in kept)
                if min(new) > cap:
                    continue
                child = tuple(sorted(min(c, n) for c, n in zip(kept, new))) + (mu2,)
                if child in visited:
                    continue
                visited.add(child)
                nxt.append(child)
                if len(visited) > budget:
                    raise RuntimeError("node budget exceeded")
        frontier = nxt
    return [BendVector(s) for s in sorted(visited)]


# ---------------------------------------------------------------------------
# report queries


def bend_set(report: PackingReport) -> List[int]:
    return list(report.bends)


def missing_admissible(report: PackingReport, up_to: int,
                       start: Optional[int] = None) -> List[int]:
    """Admissible integers in [start, up_to] absent from the bend set."""
    if not report.frontier_exhausted:
        raise ValueError("refusing a non-exhausted report: its bend set "
                         "may be incomplete")
    if up_to > report.bend_cap:
        raise ValueError(f"scan bound {up_to} exceeds the report cap "
                         f"{report.bend_cap}")
    if start is None:
        start = report.min_bend
    have = set(report.bends)
    forbidden = (-report.epsilon) % 4
    return [n for n in range(start, up_to + 1)
            if n % 4 != forbidden and n not in have]


def classify(report: PackingReport) -> str:
    return report.classification


# ---------------------------------------------------------------------------
# scene export


def _sphere_record(v: Coord5) -> dict:
    s = sphere_from_coords(v)
    rec = {
        "kind": "sphere" if isinstance(s, HonestSphere) else "plane",
        "a": str(v.a), "b": str(v.b),
        "xhat": str(v.xhat), "yhat": str(v.yhat), "zhat": str(v.zhat),
        "bend": v.b.to_float(),
    }
    if isinstance(s, HonestSphere):
        rec.update(
            cx=s.center[0].to_float(), cy=s.center[1].to_float(),
            cz=s.center[2].to_float(), r=s.oriented_radius.to_float(), h=None,
        )
    else:
        rec.update(
            cx=s.unit_normal[0].to_float(), cy=s.unit_normal[1].to_float(),
            cz=s.unit_normal[2].to_float(), r=None, h=s.offset.to_float(),
        )
    return rec


_CSV_FIELDS = ("kind", "a", "b", "xhat", "yhat", "zhat",
               "bend", "cx", "cy", "cz", "r", "h")


def export_scene(report: PackingReport, fmt: str = "csv") -> bytes:
    """One record per sphere of a geometric report, ordered by |bend|
    then exact coordinates."""
    if report.mode != "geom" or report.spheres is None:
        raise ValueError("scene export needs a geometric-mode report")
    if fmt not in ("csv", "json"):
        raise ValueError("format must be 'csv' or 'json'")
    ordered = sorted(report.spheres, key=lambda v: (abs(v.b), v.serialize()))
    records = [_sphere_record(v) for v in ordered]
    if fmt == "json":
        doc = {"schema_version": 1, "spheres": records}
        return (json.dumps(doc, indent=2, sort_keys=True) + "\n").encode()
    lines = [",".join(_CSV_FIELDS)]
    for rec in records:
        lines.append(",".join(
            "" if rec[f] is None else str(rec[f]) for f in _CSV_FIELDS))
    return ("\n".join(lines) + "\n").encode()


def resolve_budget(explicit: Optional[int] = None) -> int:
    if explicit is not None:
        return explicit
    env = os.environ.get("ORTHOPLEX_BUDGET")
    if env:
        return int(env)
    return DEFAULT_BUDGET
