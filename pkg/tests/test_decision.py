import random
from fractions import Fraction as F
from itertools import combinations

import pytest

from edlogic.decision import (Model, atoms_extension, build_model, check_consistency,
                              countermodel, e_from_mass, entails, extension, index_set,
                              label_distance, model_labels, model_size, parse_index_set,
                              satisfies, subsets_of, translate_conjunct,
                              translate_conjunct_direct)
from edlogic.errors import (AtomBudgetExceeded, InvalidMass, ModelBudgetExceeded,
                            UnknownProposition)
from edlogic.linarith import feasible, feasible_by_elimination
from edlogic.space import expected_distance, revalidate, validate_space
from edlogic.syntax import (AtomBasis, Not, PropAnd, PropNot, PropOr, PropVar, atom_basis,
                            parse, parse_prop, print_prop, prop_to_atom_set, to_dnf)

from gen import (rand_atom_mass, rand_consistent_formula, rand_formula, rand_prop,
                 rand_space)


@pytest.fixture
def example1_model():
    space = validate_space(["A", "B"], [[0, "0.2"], ["0.2", 0]], ["0.1", "0.9"])
    return Model.from_mapping(space, {"A": ["AtA"], "B": []}, ["AtA"])


def rand_model(rng, props, lo=1, hi=5):
    space = rand_space(rng, lo=lo, hi=hi)
    val = {p: [q for q in props if rng.random() < 0.5] for p in space.points}
    return Model.from_mapping(space, val, props)


def test_index_sets():
    assert index_set(0) == "{}" and index_set(0b101) == "{1,3}"
    for m in range(64):
        assert parse_index_set(index_set(m)) == m
    assert sorted(subsets_of(0b101)) == [0, 1, 4, 5]


def test_extension(example1_model):
    m = example1_model
    assert extension(m, parse_prop("true")) == 0b11
    assert extension(m, parse_prop("false")) == 0
    assert extension(m, PropVar("AtA")) == 0b01
    assert extension(m, PropNot(PropVar("AtA"))) == 0b10
    with pytest.raises(UnknownProposition):
        extension(m, PropVar("zzz"))


def test_satisfies(example1_model):
    m = example1_model
    assert satisfies(m, parse("ED(true) = 0"))
    assert satisfies(m, parse("ED(false) = 1"))
    assert satisfies(m, parse("ED(AtA) = 0.18"))
    assert not satisfies(m, parse("ED(AtA) > 0.18"))
    assert satisfies(m, parse("ED(!AtA) = 0.02"))
    rng = random.Random(1)
    for _ in range(100):
        f = rand_formula(rng, ["AtA"], 3)
        assert satisfies(m, Not(f)) != satisfies(m, f)


def test_translate_examples():
    basis = atom_basis(parse("ED(p) >= 0"))
    base = translate_conjunct((), basis)
    assert base.variables == ("m_{}", "m_{1}", "m_{2}", "m_{1,2}")
    assert len(base.constraints) == 4 + 2
    s = translate_conjunct(to_dnf(parse("ED(true) = 0"))[0], basis)
    last = s.constraints[-1]
    assert last.coeffs == (1, 0, 0, 0) and last.rel == "=" and last.bound == 0
    s = translate_conjunct(to_dnf(parse("ED(false) = 1"))[0], basis)
    assert s.constraints[-1].coeffs == (1, 1, 1, 1) and feasible(s)
    # ED(p): p holds on atom 2 only, so e_{2} = m_{} + m_{1}
    s = translate_conjunct(to_dnf(parse("ED(p) >= 1/2"))[0], basis)
    assert s.constraints[-1].coeffs == (1, 1, 0, 0)
    bad = translate_conjunct(to_dnf(parse("ED(p) = 0.5 & ED(p) > 0.6"))[0], basis)
    assert not feasible(bad) and not feasible_by_elimination(bad)


def test_translate_budget():
    f = parse("ED(a & b & c & d) >= 0")
    with pytest.raises(AtomBudgetExceeded):
        translate_conjunct(to_dnf(f)[0], atom_basis(f))
    with pytest.raises(AtomBudgetExceeded):
        check_consistency(f)
    with pytest.raises(AtomBudgetExceeded):
        translate_conjunct_direct(to_dnf(f)[0], atom_basis(parse("ED(a & b) >= 0")))


def test_encodings_agree_k_le_1():
    rng = random.Random(2)
    for _ in range(60):
        names = rng.choice([["p"], []])
        f = rand_formula(rng, names or ["p"], 2) if names else parse(
            rng.choice(["ED(true) = 0", "ED(false) < 1", "ED(true) + ED(false) >= 1/2"]))
        basis = atom_basis(f)
        if basis.k > 1:
            continue
        for conj in to_dnf(f):
            a = feasible(translate_conjunct(conj, basis))
            b = feasible(translate_conjunct_direct(conj, basis))
            c = feasible_by_elimination(translate_conjunct(conj, basis))
            assert bool(a) == bool(b) == bool(c)


def test_e_from_mass():
    # n = 2: e_{1} = m_{} + m_{2}, e_{} = total
    e = e_from_mass({0b01: F(1, 2), 0b10: F(1, 2)}, 2)
    assert e == {0: 1, 0b01: F(1, 2), 0b10: F(1, 2), 0b11: 0}


def test_model_labels():
    for n in (1, 2, 4):
        labels = model_labels(n)
        assert len(labels) == model_size(n) == n * n * 2 ** (n - 1)
        assert len(set(labels)) == len(labels)


def test_build_model_k0():
    basis = AtomBasis(())
    m = build_model({1: F(1)}, basis)
    assert len(m.space) == 1
    assert m.ed(atoms_extension(m, basis, 1)) == 0
    assert m.ed(atoms_extension(m, basis, 0)) == 1


def test_build_model_k1_example():
    basis = AtomBasis(("p",))
    m = build_model({0b01: F(1, 2), 0b10: F(1, 2)}, basis)
    assert len(m.space) == 8
    # atom 1 (index 0) is !p; its extension is X_1 ∪ Y_1
    assert m.ed(atoms_extension(m, basis, 0b01)) == F(1, 2)
    assert m.ed(extension(m, parse_prop("!p"))) == F(1, 2)
    assert m.ed(extension(m, parse_prop("p"))) == F(1, 2)
    revalidate(m.space)


def test_build_model_errors():
    basis = AtomBasis(("p",))
    with pytest.raises(InvalidMass):
        build_model({0: F(1, 2), 1: F(1, 2)}, basis)
    with pytest.raises(InvalidMass):
        build_model({1: F(1, 2)}, basis)
    with pytest.raises(InvalidMass):
        build_model({1: F(3, 2), 2: F(-1, 2)}, basis)
    with pytest.raises(ModelBudgetExceeded):
        build_model({1: F(1)}, AtomBasis(("p", "q", "r")), point_cap=100)


def test_label_distance_matches_partition():
    for n in (1, 2, 4):
        labels = model_labels(n)
        basis = AtomBasis(tuple("pq"[: n.bit_length() - 1]))
        m = build_model({(1 << n) - 1: F(1)}, basis, verify=False)
        metric = m.space.metric
        for a in range(len(labels)):
            for b in range(len(labels)):
                assert metric(a, b) == label_distance(labels[a], labels[b])


def test_models_validate_dense_and_reproduce_e():
    rng = random.Random(3)
    for _ in range(25):
        k = rng.randint(0, 2)
        basis = AtomBasis(tuple("pq"[:k]))
        mass = rand_atom_mass(rng, basis.n)
        m = build_model(mass, basis)
        dense = revalidate(m.space)
        e = e_from_mass(mass, basis.n)
        for I in range(1 << basis.n):
            assert expected_distance(dense, atoms_extension(m, basis, I)) == e[I]


def test_check_consistency_examples():
    assert not check_consistency(parse("ED(true) = 1"))
    assert not check_consistency(parse("ED(p) + ED(!p) > 1"))
    assert not check_consistency(parse("ED(p) = 0.5 & ED(p) > 0.6"))
    res = check_consistency(parse("ED(p) >= 0.3 & ED(!p) >= 0.3"))
    assert res and res.model is not None
    assert satisfies(res.model, parse("ED(p) >= 0.3 & ED(!p) >= 0.3"))
    ex = parse("(2*ED(P & Q) + 0.23*ED(!Q) >= 0.2) | (ED(!P) < 0.1)")
    res = check_consistency(ex)
    assert res and len(res.model.space) == 128 and satisfies(res.model, ex)


def test_soundness_loop():
    rng = random.Random(4)
    for _ in range(40):
        k = rng.randint(0, 2)
        props = ["p", "q"][:k]
        basis = AtomBasis(tuple(props))
        mass = rand_atom_mass(rng, basis.n)
        e = e_from_mass(mass, basis.n)
        f = rand_consistent_formula(rng, props or ["p"],
                                    lambda psi: e[prop_to_atom_set(psi, basis)]) if k else \
            parse("ED(true) = 0 & ED(false) >= 1")
        if atom_basis(f).props != basis.props:
            continue
        res = check_consistency(f)
        assert res.consistent
        assert satisfies(res.model, f)
        for I in range(1 << res.basis.n):
            assert res.model.ed(atoms_extension(res.model, res.basis, I)) == res.e[I]


def test_random_formulas_verdicts_match_models():
    rng = random.Random(5)
    for _ in range(60):
        f = rand_formula(rng, ["p", "q"], 2)
        res = check_consistency(f)
        neg = check_consistency(Not(f), build=False)
        assert res.consistent or neg.consistent
        if res:
            assert satisfies(res.model, f)


def inclusion_exclusion(phis):
    """ED(φ1 ∧ … ∧ φn) >= Σ_r (-1)^{r+1} Σ_{|I|=r} ED(∨_{i∈I} φi) as one formula."""
    lhs = phis[0]
    for p in phis[1:]:
        lhs = PropAnd(lhs, p)
    parts = ["ED(" + print_prop(lhs) + ")"]
    for r in range(1, len(phis) + 1):
        for sub in combinations(phis, r):
            disj = sub[0]
            for p in sub[1:]:
                disj = PropOr(disj, p)
            sign = "-" if r % 2 else "+"
            parts.append(f"{sign} ED({print_prop(disj)})")
    return parse(" ".join(parts) + " >= 0")


def test_axioms_hold_in_random_models():
    rng = random.Random(6)
    props = ["p", "q", "r"]
    for _ in range(40):
        m = rand_model(rng, props)
        assert satisfies(m, parse("ED(true) = 0"))
        assert satisfies(m, parse("ED(false) = 1"))
        for _ in range(3):
            phi = rand_prop(rng, props, 3)
            psi = rand_prop(rng, props, 3)
            assert satisfies(m, parse(f"ED({print_prop(phi)}) >= 0"))
            # substitution of equivalents
            assert m.ed(extension(m, phi)) == m.ed(extension(m, PropNot(PropNot(phi))))
            assert m.ed(extension(m, PropAnd(phi, psi))) == m.ed(extension(m, PropAnd(psi, phi)))
            # anti-monotonicity along φ∧ψ ⇒ φ
            assert satisfies(m, parse(f"ED(({print_prop(phi)}) & ({print_prop(psi)})) "
                                      f">= ED({print_prop(phi)})"))
            n = rng.randint(1, 3)
            assert satisfies(m, inclusion_exclusion([rand_prop(rng, props, 2)
                                                     for _ in range(n)]))


def test_validities():
    assert entails([], parse("ED(!p) + ED(p) <= 1"))
    assert entails([], parse("ED(p) >= ED(p & q) + ED(p & !q) - 1"))
    assert entails([], parse("ED(p & q) >= ED(p) + ED(q) - ED(p | q)"))
    assert entails([], parse("ED(p & q) >= ED(p)"))
    assert entails([parse("ED(p) = 0.3")], parse("ED(p) >= 0.2"))
    assert entails([], parse("ED(p) >= 0"))
    # the printed direction of anti-monotonicity is not valid
    assert not entails([], parse("ED(p & q) <= ED(p)"))
    # false implies p, yet ED(false) <= ED(p) would force ED(p) = 1
    assert not entails([], parse("ED(false) <= ED(p)"))
    assert entails([], parse("ED(false) >= ED(p)"))


def test_countermodel():
    res = countermodel([parse("ED(p) = 0.1")], parse("ED(p) = 0.2"))
    assert res.consistent
    assert satisfies(res.model, parse("ED(p) = 0.1"))
    assert not satisfies(res.model, parse("ED(p) = 0.2"))


def test_k3_model():
    f = parse("ED(p & q & r) >= 0.5 & ED(p | q) < 0.4 & ED(!r) > 0.1")
    res = check_consistency(f)
    assert res and len(res.model.space) == 8192
    assert satisfies(res.model, f)


def test_model_cap_skips_model():
    res = check_consistency(parse("ED(p & q) >= 0.1"), model_point_cap=10)
    assert res and res.model is None
