import numpy as np
import pytest

from ringwave import (
    BandoFtl,
    Composition,
    NoEquilibriumError,
    PopulationSpec,
    VelocityPreference,
    equilibrium_from_length,
    equilibrium_from_velocity,
    eval_preference,
    preferred_headway,
)

from conftest import REF_HEADWAY, composition_of

PREF = VelocityPreference(v_max=9.72, l_v=4.5, d0=2.23)
OTHER_PREF = VelocityPreference(v_max=11.0, l_v=5.0, d0=3.0)


def test_single_class_length():
    model = BandoFtl(a=2.0, b=6.0, pref=PREF)
    comp = composition_of([model], [40])
    v = 4.0
    eq = equilibrium_from_velocity(comp, v)
    g = preferred_headway(model, v)
    assert eq.length == pytest.approx(40 * g, rel=1e-12)
    assert eq.h_bar[1] == g


def test_common_preference_means_common_headway():
    # different driving gains, same preferred-speed curve
    m1 = BandoFtl(a=4.0, b=20.0, pref=PREF)
    m2 = BandoFtl(a=0.5, b=20.0, pref=PREF)
    comp = composition_of([m1, m2], [7, 5])
    eq = equilibrium_from_velocity(comp, 3.7)
    assert eq.h_bar[1] == eq.h_bar[2]


def test_reference_scenario_length(ref_models, ref_v_bar):
    comp = composition_of(ref_models, [441, 59])
    eq = equilibrium_from_velocity(comp, ref_v_bar)
    assert eq.h_bar[1] == pytest.approx(REF_HEADWAY, abs=1e-9)
    assert eq.h_bar[2] == pytest.approx(REF_HEADWAY, abs=1e-9)
    assert eq.length == pytest.approx(5200.0, abs=1e-6)
    from ringwave import accel

    for model, cid in zip(ref_models, (1, 2)):
        assert abs(accel(model, eq.h_bar[cid], 0.0, eq.v_bar)) <= 1e-9


def test_length_velocity_round_trip():
    m1 = BandoFtl(a=1.5, b=8.0, pref=PREF)
    m2 = BandoFtl(a=0.7, b=11.0, pref=OTHER_PREF)
    comp = composition_of([m1, m2], [9, 6])
    v = 3.1
    eq = equilibrium_from_velocity(comp, v)
    back = equilibrium_from_length(comp, eq.length)
    assert back.v_bar == pytest.approx(v, abs=1e-8)
    assert abs(back.length - eq.length) <= 1e-8


def test_unified_length_inversion():
    model = BandoFtl(a=2.0, b=6.0, pref=PREF)
    comp = composition_of([model], [25])
    v_star = 5.2
    target = 25 * preferred_headway(model, v_star)
    eq = equilibrium_from_length(comp, target)
    assert eq.v_bar == pytest.approx(v_star, abs=1e-8)


def test_infeasible_lengths_rejected():
    model = BandoFtl(a=2.0, b=6.0, pref=PREF)
    comp = composition_of([model], [10])
    with pytest.raises(NoEquilibriumError):
        equilibrium_from_length(comp, 10 * PREF.l_v)  # packed at vehicle length
    with pytest.raises(NoEquilibriumError):
        equilibrium_from_length(comp, 10.0)  # below any packing
    with pytest.raises(NoEquilibriumError):
        equilibrium_from_length(comp, 1e9)


def test_velocity_out_of_range_rejected():
    m1 = BandoFtl(a=1.5, b=8.0, pref=PREF)
    comp = composition_of([m1], [3])
    with pytest.raises(NoEquilibriumError):
        equilibrium_from_velocity(comp, PREF.v_max * 1.5)


def test_length_invariant_under_ordering_permutation():
    m1 = BandoFtl(a=4.0, b=20.0, pref=PREF)
    m2 = BandoFtl(a=0.5, b=20.0, pref=OTHER_PREF)
    rng = np.random.default_rng(11)
    base = composition_of([m1, m2], [8, 5])
    lengths = []
    for _ in range(10):
        order = rng.permutation(base.ordering)
        comp = Composition(base.populations, tuple(int(x) for x in order))
        lengths.append(equilibrium_from_velocity(comp, 4.4).length)
    assert len(set(lengths)) == 1  # fsum makes the sum order-independent


def test_length_monotone_in_velocity():
    m1 = BandoFtl(a=1.5, b=8.0, pref=PREF)
    m2 = BandoFtl(a=0.7, b=11.0, pref=OTHER_PREF)
    comp = composition_of([m1, m2], [4, 4])
    vs = np.linspace(0.1, 0.9 * min(PREF.v_max, OTHER_PREF.v_max), 50)
    lengths = [equilibrium_from_velocity(comp, v).length for v in vs]
    assert all(b > a for a, b in zip(lengths, lengths[1:]))


def test_composition_validation():
    model = BandoFtl(a=1.0, b=1.0, pref=PREF)
    pop = PopulationSpec(class_id=1, model=model, count=3)
    with pytest.raises(ValueError):
        Composition(populations=(pop,), ordering=(1, 1))  # count mismatch
    with pytest.raises(ValueError):
        Composition(populations=(pop,), ordering=(1, 1, 2))  # undeclared class
    with pytest.raises(ValueError):
        Composition(populations=(pop, pop), ordering=(1, 1, 1))  # duplicate id
    with pytest.raises(ValueError):
        PopulationSpec(class_id=1, model=model, count=-2)


def test_length_inversion_with_custom_law():
    # zero-acceleration headway 6 + 1.5 v, no declared speed ceiling
    from ringwave import Custom

    law = Custom(
        f=lambda h, hd, v: 0.7 * (h - 6.0 - 1.5 * v) + 0.2 * hd,
        headway_range=(1e-3, 1e4),
    )
    comp = composition_of([law], [12])
    eq = equilibrium_from_length(comp, 12 * (6.0 + 1.5 * 3.0))
    assert eq.v_bar == pytest.approx(3.0, abs=1e-7)
    assert eq.h_bar[1] == pytest.approx(10.5, abs=1e-7)
