import pytest

from metric_lie_twofold.algebra.cochain import Cochain, Rep, ScalarForm, act
from metric_lie_twofold.algebra.linalg import equal, identity, rank
from metric_lie_twofold.algebra.liecore import (
    MetricLieAlgebra, centre, signature_of, verify, verify_isomorphism,
)
from metric_lie_twofold.algebra.sampling import random_cochain, random_twofold
from metric_lie_twofold.algebra.twofold import (
    TwofoldData, algebra_signature, build, extension_equivalent, extract, extraction_maps,
    invariant_bound_ok, psi_matrix, pullback, regularity, witness_isomorphism,
)
from metric_lie_twofold.data_loaders.json_loader import JsonLoader
from metric_lie_twofold.errors import InputError, UnsupportedCaseError
from metric_lie_twofold.processors.families import FamilySpec, build_family, sl2_killing

from conftest import EXAMPLES


def family_data(family, weights):
    return build_family(FamilySpec.create(family, weights)).data


def test_oscillator_brackets(oscillator):
    g = build(oscillator)
    expected = JsonLoader().load_algebra(EXAMPLES / "heisenberg_oscillator.json")
    assert g.labels == ["Z1", "A1", "A2", "L1"]
    assert equal(g.structure, expected.structure)
    assert equal(g.gram, expected.gram)
    assert verify(g).passed
    assert algebra_signature(oscillator) == (1, 3, 0)
    assert tuple(signature_of(g)) == (1, 3, 0)


@pytest.mark.parametrize("family, weights, signature", [
    ("osc", [[1], [2]], (1, 5, 0)),
    ("osc", [[1, 0], [0, 1], [1, 1]], (2, 8, 0)),
    ("d", [[1, 0], [0, 1], [1, 1]], (2, 9, 0)),
    ("dA", [[2], [1]], (2, 6, 0)),
])
def test_family_algebras_are_metric(family, weights, signature):
    data = family_data(family, weights)
    g = build(data)
    assert verify(g).passed
    assert algebra_signature(data) == signature
    assert tuple(signature_of(g)) == signature


def test_build_rejects_non_cocycle():
    rep = Rep.from_weights([[1, 1, 1]])
    alpha = Cochain(rep, 2, {(0, 1): [1, 0]})
    data = TwofoldData(rep, alpha, ScalarForm.zero(3, 3))
    assert data.violations() == ["cocycle"]
    with pytest.raises(InputError, match="cocycle"):
        build(data)


def test_build_rejects_quadratic_violation():
    rep = Rep.trivial(4, identity(1))
    alpha = Cochain(rep, 2, {(0, 1): [1], (2, 3): [1]})
    data = TwofoldData(rep, alpha, ScalarForm.zero(4, 3))
    with pytest.raises(InputError, match="quadratic_condition"):
        build(data)


def test_forms_must_match_representation(oscillator):
    with pytest.raises(InputError):
        TwofoldData(oscillator.rep, oscillator.alpha, ScalarForm.zero(2, 3))


def test_zero_weight_plane_is_not_regular(rotation):
    data = rotation([[1], [0]])
    report = regularity(data)
    assert not report.regular
    assert report.nullity == 2
    assert centre(build(data)).dim == data.l + report.nullity
    assert report.to_dict()["nullity"] == 2


def test_three_form_decides_regularity():
    loader = JsonLoader()
    trivial = loader.load_twofold(EXAMPLES / "l3_trivial.json")
    volume = loader.load_twofold(EXAMPLES / "l3_volume.json")
    assert regularity(trivial).nullity == 3
    assert regularity(volume).regular
    assert centre(build(volume)).dim == 3
    assert invariant_bound_ok(volume)


def test_regularity_matches_centre_on_random_data(rng):
    for _ in range(8):
        data = random_twofold(rng)
        assert centre(build(data)).dim == data.l + regularity(data).nullity


def test_invariant_bound(rotation):
    assert invariant_bound_ok(rotation([[1]]))
    assert not invariant_bound_ok(rotation([[1]], fixed=1))
    assert invariant_bound_ok(rotation([[1, 0]], fixed=1))


def test_volume_form_separates_trivial_data():
    loader = JsonLoader()
    trivial = loader.load_twofold(EXAMPLES / "l3_trivial.json")
    volume = loader.load_twofold(EXAMPLES / "l3_volume.json")
    assert extension_equivalent(trivial, volume) is None
    assert extension_equivalent(volume, volume) is not None


def test_equivalence_recovers_action(rng):
    for _ in range(5):
        data = random_twofold(rng)
        tau = random_cochain(rng, data.rep, 1)
        target = data.with_forms(*act(data.alpha, data.gamma, tau))
        witness = extension_equivalent(data, target)
        assert witness is not None
        replay = act(data.alpha, data.gamma, witness.tau)
        assert replay[0] == target.alpha and replay[1] == target.gamma
        psi = psi_matrix(data.rep, witness.tau)
        assert verify_isomorphism(build(data), build(target), psi) == []


def test_equivalence_needs_common_representation(rotation):
    with pytest.raises(InputError):
        extension_equivalent(rotation([[1]]), rotation([[2]]))


def test_psi_is_an_automorphism_for_rank_one(oscillator):
    tau = Cochain(oscillator.rep, 1, {(0,): [1, "1/2"]})
    psi = psi_matrix(oscillator.rep, tau)
    g = build(oscillator)
    assert verify_isomorphism(g, g, psi) == []


def test_identity_witness(rotation):
    data = family_data("d", [[1, 0], [0, 1]])
    check = witness_isomorphism(data, data, identity(2), identity(5),
                                Cochain.zero(data.rep, 1))
    assert check.ok
    assert equal(check.matrix, identity(9))


def test_witness_reports_broken_intertwining(rotation):
    first, second = rotation([[1], [2]]), rotation([[1], [3]])
    check = witness_isomorphism(first, second, identity(1), identity(4),
                                Cochain.zero(first.rep, 1))
    assert check.failures == ["representation_intertwining"]


def test_pullback_along_scaling(rotation):
    data = rotation([[2]])
    pulled = pullback(data, [[3]], identity(2), data.rep)
    assert pulled.alpha.is_zero() and pulled.gamma.is_zero()


def round_trip(original):
    result = extract(build(original))
    extracted = result.data
    assert (extracted.l, extracted.a) == (original.l, original.a)
    assert regularity(extracted).regular
    S, U = extraction_maps(result, extracted.l, extracted.a)
    assert rank(S) == extracted.l and rank(U) == extracted.a
    equivalence = extension_equivalent(extracted, pullback(original, S, U, extracted.rep))
    assert equivalence is not None
    return witness_isomorphism(extracted, original, S, U, equivalence.tau)


def test_extract_round_trip_oscillator(oscillator):
    assert round_trip(oscillator).ok


def test_extract_round_trip_after_action(rng):
    data = family_data("d", [[1, 0], [0, 1]])
    tau = random_cochain(rng, data.rep, 1)
    moved = data.with_forms(*act(data.alpha, data.gamma, tau))
    assert round_trip(moved).ok


def test_extract_recovers_heisenberg_example():
    g = JsonLoader().load_algebra(EXAMPLES / "heisenberg_oscillator.json")
    result = extract(g)
    assert (result.data.l, result.data.a) == (1, 2)
    assert verify_isomorphism(build(result.data), g, result.matrix) == []


def test_extract_rejects_abelian_algebra():
    with pytest.raises(InputError, match="abelian"):
        extract(MetricLieAlgebra.from_brackets(identity(2), {}))


def test_extract_rejects_semisimple_algebra():
    with pytest.raises(UnsupportedCaseError):
        extract(sl2_killing(-1))


@pytest.mark.parametrize("weights", [[[1]], [[1, 0], [0, 1], [1, 1]], [[2, 1], [1, 3]]])
def test_appending_zero_weight_breaks_regularity(rotation, weights):
    l = len(weights[0])
    assert regularity(rotation(weights)).regular
    padded = rotation(weights + [[0] * l])
    report = regularity(padded)
    assert not report.regular
    assert report.nullity == 2
    for L0, A0 in report.witnesses:
        assert not any(L0)
        assert any(A0)
