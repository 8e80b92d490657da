import pytest

from comproj.algebra import projective_rep, simple_rep
from comproj.comhom import (
    ComhomDegree,
    ComhomPoint,
    NotInStratumError,
    build_from_homology,
    comhom_fibre_check,
    dimension_report,
    fibre_dim_check,
    fibre_dims,
    lift,
    membership_rep_hr,
    pi,
    rho,
    structure_group_element,
    validate_comhom_point,
)
from comproj.complexes import ComplexPoint, InfeasibleProfile, DimArray, random_complex, random_complex_fixed_rank, rank_profile, strata_profile
from comproj.representations import GradedMap, Representation, direct_sum, is_iso, projective_power

from conftest import a2, a3_monomial

D4 = DimArray(3, 0, ((2, 2, 2), (2, 4, 1), (2, 3, 2)))
R4 = DimArray(3, 1, ((0, 2, 1), (0, 1, 1)))
A2_D = DimArray(2, 0, ((1, 0), (1, 1)))
A2_R = DimArray(2, 1, ((1, 1),))


def power_sum(alg, parts):
    reps = []
    for kind, a, c in parts:
        base = projective_rep(alg, a) if kind == "P" else simple_rep(alg, a)
        reps += [base] * c
    return direct_sum(reps)


def test_lift_worked_example():
    alg = a3_monomial()
    prof = strata_profile(alg, D4, R4)
    x = random_complex_fixed_rank(alg, prof, seed=4)
    z = lift(x)
    assert validate_comhom_point(z) is None
    assert all(z.parts[i].eta.space.d == (2, 2, 2) for i in (1, 2, 3))
    assert pi(z).same_as(x)


def test_lift_zero_complex():
    alg = a3_monomial()
    x = ComplexPoint(alg, D4)
    z = lift(x)
    assert validate_comhom_point(z) is None
    for i, h in rho(z).items():
        assert h.dim == projective_power(alg, D4[i - 1]).dim
        assert z.parts[i].phi.is_zero()


def test_lift_a2():
    alg = a2()
    prof = strata_profile(alg, A2_D, A2_R)
    x = random_complex_fixed_rank(alg, prof, seed=0)
    z = lift(x)
    assert z.parts[2].eta.space.d == (0, 1)
    assert z.parts[2].gamma.is_iso() and z.parts[2].H.dim == (0, 1)


def test_membership_worked_example():
    alg = a3_monomial()
    prof = strata_profile(alg, D4, R4)
    good = power_sum(alg, [("S", 0, 2), ("P", 1, 2), ("P", 2, 1)])
    bad = power_sum(alg, [("P", 0, 2), ("P", 2, 3)])
    gen3 = projective_power(alg, (2, 2, 2))
    deg2_bad = power_sum(alg, [("S", 0, 2), ("P", 1, 3)])
    deg2_good = power_sum(alg, [("P", 0, 2), ("P", 1, 1), ("P", 2, 2)])
    assert good.dim == (2, 2, 3) and bad.dim == (2, 2, 3)
    assert membership_rep_hr(alg, prof, {1: good, 2: deg2_good, 3: gen3})
    assert not membership_rep_hr(alg, prof, {1: bad, 2: deg2_good, 3: gen3})
    assert not membership_rep_hr(alg, prof, {1: good, 2: deg2_bad, 3: gen3})


def test_membership_zero_homology():
    alg = a2()
    d = DimArray(2, 0, ((0, 1), (0, 1)))
    prof = strata_profile(alg, d, DimArray(2, 1, ((0, 1),)))
    zero = Representation.zero_maps(alg, (0, 0))
    assert membership_rep_hr(alg, prof, {1: zero, 2: zero})


def test_build_worked_example_ranks():
    alg = a3_monomial()
    prof = strata_profile(alg, D4, R4)
    H = {
        1: power_sum(alg, [("S", 0, 2), ("P", 1, 2), ("P", 2, 1)]),
        2: power_sum(alg, [("S", 0, 1), ("P", 0, 1), ("P", 1, 2), ("P", 2, 1)]),
        3: projective_power(alg, (2, 2, 2)),
    }
    z = build_from_homology(alg, prof, H)
    assert validate_comhom_point(z) is None
    assert rank_profile(pi(z)) == R4
    assert all(rho(z)[i] is H[i] for i in H)


def test_build_rejects_non_members():
    alg = a3_monomial()
    prof = strata_profile(alg, D4, R4)
    H = {1: power_sum(alg, [("P", 0, 2), ("P", 2, 3)]), 2: None, 3: None}
    with pytest.raises(NotInStratumError):
        build_from_homology(alg, prof, H)


def test_build_a2():
    alg = a2()
    prof = strata_profile(alg, A2_D, A2_R)
    H = {1: Representation.zero_maps(alg, (0, 0)), 2: projective_rep(alg, 1)}
    z = build_from_homology(alg, prof, H)
    assert rank_profile(pi(z)) == A2_R


def test_build_zero_profile():
    alg = a2()
    prof = strata_profile(alg, DimArray(2), DimArray(2))
    z = build_from_homology(alg, prof, {})
    assert validate_comhom_point(z) is None and not z.parts


def test_gamma_not_epi_detected():
    alg = a2()
    prof = strata_profile(alg, A2_D, A2_R)
    z = lift(random_complex_fixed_rank(alg, prof, seed=3))
    p = z.parts[2]
    broken = ComhomDegree(p.i, p.partial, p.eta, p.phi, GradedMap.zero(p.gamma.source, p.H), p.H)
    bad = validate_comhom_point(ComhomPoint(alg, z.profile, {**z.parts, 2: broken}))
    assert bad is not None and "gamma not epi" in bad.message


def test_rho_of_lift_matches_homology(rng):
    from comproj.complexes import homology_rep

    alg = a3_monomial()
    for _ in range(5):
        x = random_complex(alg, D4, rng)
        z = lift(x)
        for i, h in rho(z).items():
            assert is_iso(h, homology_rep(x, i - 1))


def test_two_lifts_differ_by_automorphism(rng):
    alg = a3_monomial()
    x = random_complex(alg, D4, rng)
    z = lift(x)
    w = build_from_homology(alg, z.profile, rho(z))
    w_lift = lift(pi(w))
    for i in z.profile.indices:
        u = structure_group_element(w_lift, w, i)
        assert u is not None and u.is_iso()


def test_fibre_dims_examples():
    alg = a2()
    fib = fibre_dims(strata_profile(alg, A2_D, A2_R))
    assert (fib.pi2, fib.pi4, fib.rho3, fib.rho4) == (1, 2, 2, 1)
    assert fib.rho_total == 5 and fib.pi_total == 3
    zero = fibre_dims(strata_profile(alg, DimArray(2), DimArray(2)))
    assert zero.rho_total == zero.pi_total == 0
    big = fibre_dims(strata_profile(a3_monomial(), D4, R4))
    assert big.pi4 == big.rho2 == 60
    with pytest.raises(InfeasibleProfile):
        fibre_dims(strata_profile(alg, A2_D, DimArray(2, 1, ((3, 3),))))


def test_dimension_report_examples():
    alg = a2()
    rep = dimension_report(strata_profile(alg, A2_D, A2_R), 0)
    assert rep.chain_dims == (2,) and rep.closed_form_dims == (0,) and rep.discrepancy
    zero = dimension_report(strata_profile(alg, DimArray(2), DimArray(2)), 0)
    assert zero.chain_dims == (0,) and not zero.discrepancy
    one = dimension_report(strata_profile(alg, DimArray(2, 0, ((0, 1), (0, 1))), DimArray(2, 1, ((0, 1),))), 0)
    assert one.chain_dims == (1,)


def test_fibre_dim_check_examples(rng):
    alg = a2()
    x = random_complex_fixed_rank(alg, strata_profile(alg, A2_D, A2_R), seed=1)
    assert [(c.i, c.computed) for c in fibre_dim_check(x)] == [(1, 1), (2, 1)]
    zero = ComplexPoint(a3_monomial(), D4)
    assert all(c.ok for c in fibre_dim_check(zero))
    y = random_complex_fixed_rank(a3_monomial(), strata_profile(a3_monomial(), D4, R4), seed=2)
    assert [c.computed for c in fibre_dim_check(y)] == [20, 20, 20]


def test_comhom_fibre_checks_on_built_points():
    alg = a3_monomial()
    prof = strata_profile(alg, D4, R4)
    for seed in range(3):
        z = lift(random_complex_fixed_rank(alg, prof, seed=seed))
        for a, b in comhom_fibre_check(z):
            assert a.ok and b.ok
