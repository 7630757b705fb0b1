from __future__ import annotations

import json
from collections import Counter
from fractions import Fraction

import numpy as np
import pytest

from hyperell.ensemble import (
    BudgetError,
    CacheError,
    _digest,
    MomentCache,
    accumulate_moments,
    chi_square_ensemble_direct,
    chi_square_ensemble_sum,
    get_moments,
    load_cache,
    moments_from_scan,
    nonvanishing_proportion,
    one_level_average,
    one_level_average_zeros,
    pair_correlation_average,
    pair_correlation_exact,
    pair_correlation_zeros,
    save_cache,
    scan_ensemble,
    simple_zero_proportion,
    verify_sample,
)
from hyperell.fqx import enumerate_hyperelliptic, monic_irreducibles, parse_field
from hyperell.lfunction import l_coefficients
from hyperell.testfn import fejer
from oracle_values import ORACLE


@pytest.mark.parametrize("q,g", [("3", 1), ("3", 2), ("5", 1), ("9", 1), ("27", 1), ("7", 1)])
def test_engine_matches_per_discriminant_route(q, g):
    F = parse_field(q)
    scan = scan_ensemble(F, g)
    engine = Counter({tuple(int(x) for x in row): int(c) for row, c in zip(scan.heads, scan.counts)})
    direct = Counter(l_coefficients(F, D).coeffs[1 : g + 1] for D in enumerate_hyperelliptic(F, 2 * g + 1))
    assert engine == direct


@pytest.mark.parametrize("key", sorted(ORACLE["stats"]))
def test_moments_match_point_count_oracle(key):
    q, g = map(int, key.split(","))
    mc = accumulate_moments(parse_field(str(q)), g, 2 * g)
    ref = ORACLE["stats"][key]
    assert (mc.H, mc.S1, mc.S2) == (ref["H"], ref["S1"], ref["S2"])
    assert mc.nonvanishing == ref["nonvanishing"]
    assert mc.simple_zeros == ref["simple_zeros"]


def test_proportions(F3):
    for g in (1, 2, 3):
        mc = accumulate_moments(F3, g, 1)
        assert 0 <= nonvanishing_proportion(mc) <= 1
        assert 0 <= simple_zero_proportion(mc) <= 1
        assert all(o % 2 == 0 for o in mc.central_orders)
    assert simple_zero_proportion(accumulate_moments(F3, 0, 1)) is None


def test_genus_zero_has_no_zeros(F3):
    mc = accumulate_moments(F3, 0, 2)
    assert mc.H == 3 and one_level_average(fejer(2), mc) == 0.0


@pytest.mark.parametrize("q,g", [("3", 2), ("5", 1), ("3", 3)])
def test_averages_two_routes(q, g):
    F = parse_field(q)
    scan = scan_ensemble(F, g)
    for M in (2, g + 1, 2 * g + 2):
        tf = fejer(M)
        mc = moments_from_scan(scan, tf.N)
        assert abs(one_level_average(tf, mc) - one_level_average_zeros(tf, F, g, scan)) < 1e-9
        assert abs(pair_correlation_average(tf, mc) - pair_correlation_zeros(tf, F, g, scan)) < 1e-9
        assert isinstance(pair_correlation_exact(tf, mc), Fraction)


def test_threads_do_not_change_results(F3):
    a = scan_ensemble(F3, 3, threads=1)
    b = scan_ensemble(F3, 3, threads=3)
    assert np.array_equal(a.heads, b.heads) and np.array_equal(a.counts, b.counts)


def test_budget_refusal(F3):
    with pytest.raises(BudgetError) as err:
        scan_ensemble(F3, 3, budget=100)
    assert err.value.needed == 3**7


def test_cache_round_trip_and_truncation(tmp_path, F3):
    mc = accumulate_moments(F3, 2, 6)
    path = save_cache(mc, tmp_path)
    assert load_cache(tmp_path, "3", 2, 6) == mc
    small = get_moments(F3, 2, 3, tmp_path)
    assert small.S1 == mc.S1[:3] and small.Nmax == 3
    obj = json.loads(path.read_text())
    assert MomentCache.from_json(obj) == mc


def test_corrupt_cache_is_detected(tmp_path, F3):
    mc = accumulate_moments(F3, 1, 2)
    path = save_cache(mc, tmp_path)
    good = json.loads(path.read_text())

    def write(obj, redigest=False):
        obj = dict(obj)
        if redigest:
            obj.pop("digest")
            obj["digest"] = _digest(obj)
        path.write_text(json.dumps(obj))

    write({**good, "S1": [str(int(good["S1"][0]) + 1)] + good["S1"][1:]})
    with pytest.raises(CacheError, match="digest"):
        load_cache(tmp_path, "3", 1, 2)
    # a consistent digest does not hide values that break the invariants
    write({**good, "H": "17"}, redigest=True)
    with pytest.raises(CacheError, match="H does not match"):
        load_cache(tmp_path, "3", 1, 2)
    path.write_text("{not json")
    with pytest.raises(CacheError, match="not valid JSON"):
        load_cache(tmp_path, "3", 1, 2)
    write({**good, "format": 99})
    with pytest.raises(CacheError, match="format"):
        load_cache(tmp_path, "3", 1, 2)
    write(good)
    assert load_cache(tmp_path, "3", 1, 2) == mc


def test_chi_square_average_closed_form(F3):
    for dP in (1, 2):
        for P in monic_irreducibles(F3, dP):
            for g in (1, 2):
                assert chi_square_ensemble_sum(F3, P, g) == chi_square_ensemble_direct(F3, P, g)


def test_sample_verification(F3):
    rep = verify_sample(F3, 3, fraction=0.01, seed=0)
    assert rep["mismatches"] == 0 and rep["checked"] >= 20


def test_delta0_average_is_phi_hat_zero(F3):
    # Phi is the constant Phi_hat(0)/2g, so summing over the 2g zeros gives Phi_hat(0)
    from hyperell.testfn import delta0

    for g in (1, 2):
        mc = accumulate_moments(F3, g, 1)
        assert one_level_average(delta0(), mc) == 1.0
        assert one_level_average_zeros(delta0(), F3, g) == pytest.approx(1.0, abs=1e-12)
