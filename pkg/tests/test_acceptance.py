"""The eleven acceptance criteria, each run once at full size against its time limit.

Run with ``pytest tests/test_acceptance.py -v`` or directly as a script; either
way one PASS/FAIL line is printed per criterion.
"""

import sys
import time

import numpy as np
import pytest

from rigidcochains.gerbe import verify_gerbe
from rigidcochains.reports import Report
from rigidcochains.sl2 import (Setup, character_report, multiplicity_report, order_relations,
                               rigid_twist_class, unit_groups)
from rigidcochains.tower import (PRESETS, build_fundamental_family, build_root_family, preset,
                                 random_tower, verify_awes_preimages, verify_roots, verify_tower)
from rigidcochains.transfer import verify_aw, verify_es

AW_REQUIRED = ("Z/4 over Z/2", "Z/6 over Z/3", "D8 over its centre", "S3 over A3")
TOWER_SEEDS = range(5)
TRIALS = 100


def _min_trials(rep, prefixes, n):
    """Every check whose label starts with one of ``prefixes`` ran at least ``n`` trials,
    and there is at least one such check per prefix."""
    for p in prefixes:
        hits = [c for c in rep.checks if c.label.startswith(p)]
        if not hits or any(c.mode == "sampled" and c.trials < n for c in hits):
            return False
    return True


def aw_commutation():
    rep = Report()
    for name in AW_REQUIRED:
        rep.extend(verify_aw(name, TRIALS, seed=0))
    comm = Report([c for c in rep.checks if c.label.startswith("aw-differential-commutes")])
    assert len(comm.checks) == len(AW_REQUIRED)
    return comm, _min_trials(comm, ["aw-differential-commutes"], TRIALS)


def preimage_round_trips():
    rep = Report()
    for name in AW_REQUIRED:
        rep.extend(Report([c for c in verify_aw(name, TRIALS, seed=1).checks
                           if "preimage" in c.label]))
    for name in sorted(PRESETS):
        T = preset(name)
        rng = np.random.default_rng(1)
        for k in range(T.K):
            rep.extend(verify_awes_preimages(T, k, TRIALS, rng, seed=1))
    prefixes = ["aw1-preimage", "aw2-preimage", "awes1-preimage", "awes2-preimage"]
    return rep, _min_trials(rep, prefixes, TRIALS)


def es_suite():
    rep = verify_es(max_order=12, seed=0)
    exhaustive = all(c.mode == "exhaustive" for c in rep.checks)
    return rep, exhaustive and len(rep.checks) > 0


def awes_towers():
    rep = Report()
    names = set()
    for seed in TOWER_SEEDS:
        T = random_tower(seed)
        names.add(T.name)
        assert T.K == 2 and T.gamma.order <= 12 and len(T.places) <= 3
        rep.extend(verify_tower(T, seed, TRIALS))
    return rep, len(names) >= 5


def _towers():
    return [preset(n) for n in sorted(PRESETS)] + [random_tower(s) for s in TOWER_SEEDS]


def roots_and_delta():
    rep = Report()
    for T in _towers():
        roots = build_root_family(build_fundamental_family(T, 0), (1, 2, 4), 0)
        rep.extend(verify_roots(roots))
    labels = {c.label.split("[")[0] for c in rep.checks}
    return rep, {"root-power-alpha", "delta-torsion", "delta-awes2-compat"} <= labels


def gerbe_suite():
    rep = Report()
    for T in _towers():
        roots = build_root_family(build_fundamental_family(T, 0), (1, 2, 4), 0)
        rep.extend(verify_gerbe(roots, seed=0, trials=3))
    return rep, any("gerbe-localization" in c.label for c in rep.checks)


def order_relation_suite():
    return order_relations(Setup()), True


def unit_group_suite():
    rep = unit_groups(Setup())
    need = ["unit-group-has-24-elements", "unit-group-contains-Z-of-order-12",
            "unit-group-max-element-order-6", "unit-group-order-histogram"]
    return rep, all(any(c.label.startswith(n) for c in rep.checks) for n in need)


def character_suite():
    return character_report(24), True


def multiplicity_suite():
    return multiplicity_report(20), True


def twist_class_suite():
    return rigid_twist_class(Setup()), True


CRITERIA = [
    (1, "AW commutation, 100 random cochains per quotient step", 10, aw_commutation),
    (2, "aw1/aw2/awes1/awes2 preimage round trips", 30, preimage_round_trips),
    (3, "ES suite, exhaustive for |G| <= 12, exponent <= 6", 30, es_suite),
    (4, "AWES suite on 5 seeded 3-level towers", 120, awes_towers),
    (5, "roots and delta for N in {1, 2, 4}", 120, roots_and_delta),
    (6, "gerbe suite", 300, gerbe_suite),
    (7, "order relations", 1, order_relation_suite),
    (8, "unit groups of the two orders", 30, unit_group_suite),
    (9, "character criterion for |a| <= 24", 5, character_suite),
    (10, "multiplicity table for k <= 20", 5, multiplicity_suite),
    (11, "twist class equals the class of (s, -2)", 1, twist_class_suite),
]


def run_criterion(number, title, limit, fn):
    start = time.perf_counter()
    rep, coverage = fn()
    elapsed = time.perf_counter() - start
    ok = rep.passed and coverage and elapsed < limit
    why = ""
    if not rep.passed:
        why = f" first failure: {rep.first_failure().label}"
    elif not coverage:
        why = " coverage requirement not met"
    elif elapsed >= limit:
        why = f" over the {limit} s limit"
    line = (f"{'PASS' if ok else 'FAIL'} criterion {number}: {title} "
            f"[{len(rep.checks)} checks, {elapsed:.2f} s / {limit} s]{why}")
    return ok, line


@pytest.mark.slow
@pytest.mark.parametrize("number,title,limit,fn", CRITERIA, ids=[f"c{c[0]}" for c in CRITERIA])
def test_criterion(number, title, limit, fn, capsys):
    ok, line = run_criterion(number, title, limit, fn)
    with capsys.disabled():
        print("\n" + line)
    assert ok, line


if __name__ == "__main__":
    results = [run_criterion(*c) for c in CRITERIA]
    for _, line in results:
        print(line)
    sys.exit(0 if all(ok for ok, _ in results) else 1)
