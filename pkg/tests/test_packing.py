import json
import random

import pytest

from orthoplex.arithmetic import GaussianInt, bend_from_xi, gaussian_xgcd
from orthoplex.config import F0, F1, F7D, bend_vector
from orthoplex.inversive import classify_pair
from orthoplex.packing import (
    CapBelowSeedError, PackingReport, PackingSpec, export_scene,
    generate, missing_admissible, orbit_bend_vectors, resolve_budget,
)

from conftest import (
    EXPECTED_BENDS_P0, EXPECTED_BENDS_P1, EXPECTED_BENDS_P7D, EXPECTED_BLOCK_P7D,
)


_CACHE = {}


def run(seed, cap, mode="bend", budget=None):
    key = (id(seed), cap, mode, budget)
    if key not in _CACHE:
        spec = PackingSpec(seed=seed, bend_cap=cap, mode=mode,
                           budget=budget or 10 ** 7)
        _CACHE[key] = generate(spec)
    return _CACHE[key]


def test_expected_bends_p0():
    assert run(F0, 68).bends == EXPECTED_BENDS_P0


def test_expected_bends_p1():
    assert run(F1, 68).bends == EXPECTED_BENDS_P1


def test_expected_bends_p7d():
    assert run(F7D, 69).bends == EXPECTED_BENDS_P7D


def test_expected_block_p7d():
    rep = run(F7D, 250)
    block = tuple(b for b in rep.bends if 200 <= b <= 249)
    assert block == EXPECTED_BLOCK_P7D


def test_missing_admissible_examples():
    rep1 = run(F1, 68)
    assert missing_admissible(rep1, 68, start=2) == []
    rep0 = run(F0, 68)
    assert missing_admissible(rep0, 68, start=0) == []
    rep7 = run(F7D, 69)
    missing = missing_admissible(rep7, 69)
    assert missing  # asymptotic principle only: small admissibles absent
    assert {1, 2, 4}.issubset(set(missing))


def test_missing_admissible_refuses_unexhausted():
    rep = run(F1, 68, budget=3)
    assert not rep.frontier_exhausted
    with pytest.raises(ValueError):
        missing_admissible(rep, 68)


def test_missing_admissible_rejects_bound_above_cap():
    rep = run(F1, 30)
    with pytest.raises(ValueError):
        missing_admissible(rep, 31)


def test_classification():
    assert run(F1, 30).classification == "bounded"
    assert run(F0, 30).classification == "planar"
    assert run(F7D, 69).classification == "bounded"
    assert run(F1, 30, mode="geom").classification == "bounded"
    assert run(F0, 8, mode="geom").classification == "planar"


def test_cap_below_seed_rejected():
    with pytest.raises(CapBelowSeedError):
        run(F1, -2)
    with pytest.raises(CapBelowSeedError):
        run(F7D, -8)


def test_budget_marks_unexhausted():
    rep = run(F1, 68, budget=5)
    assert not rep.frontier_exhausted
    assert rep.states <= 5 + 16 * 5  # one level of slack past the budget


def test_mode_agreement_cap_30():
    for seed in (F1, F7D):
        bend_mode = run(seed, 30)
        geom_mode = run(seed, 30, mode="geom")
        assert bend_mode.bends == geom_mode.bends


def test_monotone_closure():
    small = set(run(F1, 20).bends)
    large = set(run(F1, 40).bends)
    assert small <= large
    assert set(run(F7D, 69).bends) <= set(run(F7D, 250).bends)


def test_obstruction_holds_on_reports():
    for seed, cap in ((F0, 68), (F1, 68), (F7D, 69)):
        rep = run(seed, cap)
        forbidden = rep.obstruction().forbidden_residue
        assert all(b % 4 != forbidden for b in rep.bends)


def test_geometric_pairs_never_intersect():
    rep = run(F1, 20, mode="geom")
    spheres = rep.spheres
    r = random.Random(17)
    n = len(spheres)
    for _ in range(10_000):
        i, j = r.randrange(n), r.randrange(n)
        if i == j:
            continue
        rel = classify_pair(spheres[i], spheres[j])
        assert rel.kind != "intersecting", (i, j)


def test_stabilizer_bends_appear_in_orbit():
    # bends produced by the congruence parametrization land in the BFS set
    bv = bend_vector(F1)
    r = random.Random(23)
    produced = []
    while len(produced) < 25:
        alpha = GaussianInt(r.randint(-3, 3), r.randint(-3, 3))
        beta = GaussianInt(2 * r.randint(-1, 1), 2 * r.randint(-1, 1))
        if (alpha.re + alpha.im) % 2 != 1:
            continue
        g, _, _ = gaussian_xgcd(alpha, beta)
        if not g.is_unit():
            continue
        produced.append(bend_from_xi(bv, alpha, beta))
    cap = max(produced) + 1
    rep = run(F1, cap)
    assert set(produced) <= set(rep.bends)


def test_orbit_bend_vectors_all_satisfy_cone():
    from orthoplex.config import descartes_form
    from orthoplex.ring import QSqrt2
    for seed in (F0, F1, F7D):
        vecs = orbit_bend_vectors(seed, 20)
        assert vecs
        for bv in vecs:
            assert descartes_form(bv.as_ints()) == QSqrt2(0)


def test_export_v0_configuration_alone():
    spheres = []
    seen = set()
    for row in F0.sphere_rows():
        if row.serialize() not in seen:
            seen.add(row.serialize())
            spheres.append(row)
    rep = PackingReport(mode="geom", bend_cap=2, bends=(0, 1, 2),
                        bend_multiplicity={0: 2, 1: 4, 2: 2},
                        classification="planar", epsilon=1,
                        frontier_exhausted=True, states=1,
                        spheres=tuple(spheres))
    blob = export_scene(rep, "csv").decode()
    lines = blob.strip().split("\n")
    assert len(lines) == 9  # header + 8 records
    assert sum(1 for ln in lines[1:] if ln.startswith("plane")) == 2


def test_export_empty_report_is_header_only():
    rep = PackingReport(mode="geom", bend_cap=1, bends=(),
                        bend_multiplicity={}, classification="full_space",
                        epsilon=1, frontier_exhausted=True, states=1,
                        spheres=())
    blob = export_scene(rep, "csv").decode()
    assert blob == ("kind,a,b,xhat,yhat,zhat,bend,cx,cy,cz,r,h\n")


def test_export_record_count_matches_dedupe():
    rep = run(F1, 8, mode="geom")
    blob = export_scene(rep, "csv").decode()
    assert len(blob.strip().split("\n")) == 1 + len(rep.spheres)


def test_export_json_shape_and_determinism():
    rep = run(F1, 8, mode="geom")
    blob1 = export_scene(rep, "json")
    fresh = generate(PackingSpec(seed=F1, bend_cap=8, mode="geom"))
    blob2 = export_scene(fresh, "json")
    assert blob1 == blob2
    doc = json.loads(blob1)
    assert doc["schema_version"] == 1
    kinds = {s["kind"] for s in doc["spheres"]}
    assert kinds == {"sphere"}
    negative = [s for s in doc["spheres"] if s["bend"] < 0]
    assert len(negative) == 1


def test_export_rejects_bend_mode():
    with pytest.raises(ValueError):
        export_scene(run(F1, 10), "csv")
    with pytest.raises(ValueError):
        export_scene(run(F1, 10, mode="geom"), "xml")


def test_reports_are_deterministic():
    a = generate(PackingSpec(seed=F1, bend_cap=40)).to_json_dict()
    b = generate(PackingSpec(seed=F1, bend_cap=40)).to_json_dict()
    assert json.dumps(a, sort_keys=True) == json.dumps(b, sort_keys=True)


def test_resolve_budget_env(monkeypatch):
    monkeypatch.delenv("ORTHOPLEX_BUDGET", raising=False)
    assert resolve_budget() == 10 ** 7
    assert resolve_budget(123) == 123
    monkeypatch.setenv("ORTHOPLEX_BUDGET", "456")
    assert resolve_budget() == 456
    assert resolve_budget(123) == 123


def test_non_integral_seed_rejected():
    from orthoplex.config import FMatrix
    from orthoplex.ring import QSqrt2
    from fractions import Fraction
    scaled = FMatrix(tuple(r.scale(Fraction(1, 3)) for r in F1.rows))
    with pytest.raises(ValueError):
        run(scaled, 30)
