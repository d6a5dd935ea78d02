"""
Command workflow for the metric Lie algebra tool.

This module ties the loaders, the algebra routines and the family classifier
together: every command of the command line has one method here that takes
input paths and returns a JSON-compatible result dictionary.
"""

import logging
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional, Sequence, Union

import numpy as np

from ..algebra.cochain import (
    Cochain, act, check_ek, coboundary, cup_selfcheck, increasing_tuples,
)
from ..algebra.decomp import (
    DecompWitness, euclidean_decomposable, induced_ideal, witness_failures,
)
from ..algebra.liecore import (
    Subspace, centre, centre_law_holds, derived, derived_series,
    is_abelian, is_nilpotent, is_nondegenerate_ideal, is_solvable, lower_central,
    orthogonal_complement, signature_of, verify, verify_isomorphism,
)
from ..algebra.linalg import is_zero, rank
from ..algebra.sampling import random_cochain, random_rep, random_twofold, random_vector
from ..algebra.twofold import (
    ExtractionResult, TwofoldData, algebra_signature, build, extension_equivalent, extract,
    extraction_maps, invariant_bound_ok, psi_matrix, pullback, regularity, witness_isomorphism,
)
from ..config.settings import AnalysisConfig
from ..data_loaders.codec import (
    algebra_to_dict, cochain_to_dict, matrix_to_lists, twofold_to_dict,
)
from ..data_loaders.json_loader import JsonLoader
from ..errors import InputError
from ..processors.classifier import FamilyClassifier
from ..processors.families import (
    ROWS, TABLE_ROWS, FamilySpec, WeightMatrix, build_family, random_admissible_weights,
    sl2_killing,
)
from ..utils.data_utils import summarize_checks


logger = logging.getLogger(__name__)

PathLike = Union[str, Path]

SELFCHECK_LAWS = (
    "construction_soundness", "centre_law", "regularity_consistency", "quadratic_cup_identity",
    "complex_square", "action_laws", "coboundary_action", "equivalence_round_trip",
)


def _subspace_to_dict(S: Subspace) -> Dict[str, Any]:
    return {"dim": S.dim, "basis": matrix_to_lists(S.basis)}


class CommandWorkflow:
    """Runs the tool's commands on JSON input files."""

    def __init__(self, config: Optional[AnalysisConfig] = None):
        """
        Initialize the workflow.

        Args:
            config: Analysis configuration (orbit bound, seed, instance counts)
        """
        self.config = config or AnalysisConfig()
        self.loader = JsonLoader()
        self.classifier = FamilyClassifier(self.config)

    # -- algebras -------------------------------------------------------

    def verify(self, algebra_path: PathLike) -> Dict[str, Any]:
        g = self.loader.load_algebra(algebra_path)
        report = verify(g).to_dict()
        report["dim"] = g.dim
        logger.info(f"Axioms {'hold' if report['passed'] else 'fail'} for {algebra_path}")
        return report

    def build(self, twofold_path: PathLike) -> Dict[str, Any]:
        data = self.loader.load_twofold(twofold_path)
        g = build(data)
        p, q, _ = algebra_signature(data)
        logger.info(f"Built a {g.dim}-dimensional algebra of signature ({p}, {q})")
        return {"algebra": algebra_to_dict(g), "signature": [p, q]}

    def centre(self, algebra_path: PathLike) -> Dict[str, Any]:
        g = self.loader.load_algebra(algebra_path)
        z = centre(g)
        restricted = z.basis @ g.gram @ z.basis.T
        return {"centre": _subspace_to_dict(z),
                "isotropic": is_zero(restricted),
                "centre_law": centre_law_holds(g)}

    def derived(self, algebra_path: PathLike) -> Dict[str, Any]:
        g = self.loader.load_algebra(algebra_path)
        return {
            "derived": _subspace_to_dict(derived(g)),
            "orthogonal_of_derived": _subspace_to_dict(orthogonal_complement(g, derived(g))),
            "derived_series": [S.dim for S in derived_series(g)],
            "lower_central_series": [S.dim for S in lower_central(g)],
            "abelian": is_abelian(g),
            "solvable": is_solvable(g),
            "nilpotent": is_nilpotent(g),
        }

    def signature(self, algebra_path: PathLike) -> Dict[str, Any]:
        g = self.loader.load_algebra(algebra_path)
        sig = signature_of(g)
        return {"signature": [sig.p, sig.q], "nullity": sig.r, "index": min(sig.p, sig.q)}

    def extract(self, algebra_path: PathLike,
                against_path: Optional[PathLike] = None) -> Dict[str, Any]:
        """
        Read twofold data off an algebra.

        With ``against_path`` the algebra is expected to be build(original)
        for the data in that file, and the extracted data is compared with it.
        """
        g = self.loader.load_algebra(algebra_path)
        result = extract(g)
        report: Dict[str, Any] = {"data": twofold_to_dict(result.data),
                                  "matrix": matrix_to_lists(result.matrix)}
        if against_path is not None:
            original = self.loader.load_twofold(against_path)
            report["round_trip"] = self._round_trip(result, original)
        return report

    @staticmethod
    def _round_trip(result: ExtractionResult, original: TwofoldData) -> Dict[str, Any]:
        extracted = result.data
        l, a = extracted.l, extracted.a
        if (original.l, original.a) != (l, a):
            return {"equivalent": False, "failures": ["dimension"]}
        S, U = extraction_maps(result, l, a)
        if rank(S) != l or rank(U) != a:
            return {"equivalent": False, "failures": ["invertibility"]}
        pulled = pullback(original, S, U, extracted.rep)
        equivalence = extension_equivalent(extracted, pulled)
        if equivalence is None:
            return {"equivalent": False, "failures": ["extension_equivalence"]}
        check = witness_isomorphism(extracted, original, S, U, equivalence.tau)
        return {"equivalent": check.ok, "failures": check.failures,
                "S": matrix_to_lists(S), "U": matrix_to_lists(U),
                "tau": cochain_to_dict(equivalence.tau)}

    # -- twofold data ---------------------------------------------------

    def regular(self, twofold_path: PathLike) -> Dict[str, Any]:
        data = self.loader.load_twofold(twofold_path)
        data.validate()
        report = regularity(data).to_dict()
        report["invariant_bound"] = invariant_bound_ok(data)
        if report["regular"] and not report["invariant_bound"]:
            logger.warning("Regular data exceeds the bound on invariant dimensions")
        return report

    def equivalent(self, first_path: PathLike, second_path: PathLike) -> Dict[str, Any]:
        first = self.loader.load_twofold(first_path)
        second = self.loader.load_twofold(second_path)
        first.validate()
        second.validate()
        witness = extension_equivalent(first, second)
        if witness is None:
            logger.info("Data are not extension equivalent")
            return {"equivalent": False}
        psi = psi_matrix(first.rep, witness.tau)
        problems = verify_isomorphism(build(first), build(second), psi)
        return {"equivalent": True, "tau": cochain_to_dict(witness.tau),
                "psi": matrix_to_lists(psi), "psi_verified": not problems}

    def act(self, twofold_path: PathLike, tau_path: PathLike) -> Dict[str, Any]:
        data = self.loader.load_twofold(twofold_path)
        tau = self.loader.load_cochain(tau_path, data.rep, degree=1)
        alpha, gamma = act(data.alpha, data.gamma, tau)
        return {"data": twofold_to_dict(data.with_forms(alpha, gamma))}

    def decompose_check(self, twofold_path: PathLike,
                        witness_path: Optional[PathLike] = None) -> Dict[str, Any]:
        """
        Check a decomposition witness, or decide decomposability for Euclidean a.

        A found or supplied witness is accompanied by the nondegenerate ideal
        it induces in build(data).
        """
        data = self.loader.load_twofold(twofold_path)
        data.validate()
        if witness_path is not None:
            w = self.loader.load_witness(witness_path, data.rep)
            failures = witness_failures(data, w)
            report: Dict[str, Any] = {"valid": not failures, "failures": failures}
            if not failures:
                report["ideal"] = self._ideal_report(data, w)
            return report
        result = euclidean_decomposable(data)
        report = result.to_dict()
        if result.witness is not None:
            report["data"] = twofold_to_dict(result.data)
            report["ideal"] = self._ideal_report(result.data, result.witness)
        logger.info(f"Decomposable: {result.decision} ({result.reason})")
        return report

    @staticmethod
    def _ideal_report(data: TwofoldData, w: DecompWitness) -> Dict[str, Any]:
        ideal = induced_ideal(data, w)
        report = _subspace_to_dict(ideal)
        report["nondegenerate"] = is_nondegenerate_ideal(build(data), ideal)
        return report

    # -- families -------------------------------------------------------

    def build_family(self, family_path: PathLike) -> Dict[str, Any]:
        spec = self.loader.load_family(family_path)
        if spec.family == "sl2":
            g = sl2_killing(-1)
            sig = signature_of(g)
            return {"spec": spec.to_dict(), "algebra": algebra_to_dict(g),
                    "signature": [sig.p, sig.q]}
        built = build_family(spec)
        p, q, _ = algebra_signature(built.data)
        return {"spec": spec.to_dict(), "admissible": built.admissible,
                "violations": built.violations, "data": twofold_to_dict(built.data),
                "algebra": algebra_to_dict(built.algebra()), "signature": [p, q]}

    def invariant(self, family_path: PathLike) -> Dict[str, Any]:
        spec = self.loader.load_family(family_path)
        report = self.classifier.invariant(spec).to_dict()
        report["stabilizer"] = self.classifier.stabilizer_projection(spec.row).to_dict()
        return report

    def isomorphic(self, first_path: PathLike, second_path: PathLike) -> Dict[str, Any]:
        first = self.loader.load_family(first_path)
        second = self.loader.load_family(second_path)
        return self.classifier.isomorphic_family(first, second).to_dict()

    def classify_index2(self, family_path: PathLike) -> Dict[str, Any]:
        return self.classifier.classify_index2(self.loader.load_family(family_path))

    def tabulate(self, rows: Optional[Sequence[str]] = None,
                 m_values: Sequence[int] = (1, 2, 3)) -> Dict[str, Any]:
        """
        Signature, regularity and invariant tag over a grid of rows and weight counts.

        Weights are drawn from the configured seed; pairs with m below the
        row's minimum are skipped.
        """
        rng = np.random.default_rng(self.config.seed)
        records: List[Dict[str, Any]] = []
        for row_id in rows or TABLE_ROWS:
            if row_id not in ROWS:
                raise InputError(f"unknown table row: {row_id!r}")
            row = ROWS[row_id]
            for m in m_values:
                if m < row.min_m:
                    logger.info(f"Skipping {row_id} with m={m} (needs m >= {row.min_m})")
                    continue
                W = random_admissible_weights(rng, row_id, m)
                family = "dA" if row_id == "dA" else "table"
                spec = FamilySpec.create(family, WeightMatrix(W),
                                         None if row_id == "dA" else row_id)
                built = build_family(spec)
                p, q, _ = algebra_signature(built.data)
                records.append({
                    "row": row_id, "m": m, "k": row.k, "l": row.l,
                    "dim": 2 * row.l + built.data.a, "signature": f"({p}, {q})",
                    "regular": regularity(built.data).regular, "admissible": built.admissible,
                    "tag": row.tag, "lambda": spec.weights.to_lists(),
                })
                logger.debug(f"Tabulated {row_id} with m={m}")
        logger.info(f"Tabulated {len(records)} family members")
        return {"rows": records}

    # -- randomized self-check -----------------------------------------

    def selfcheck(self, count: Optional[int] = None) -> Dict[str, Any]:
        """
        Run the algebraic laws on seeded random instances.

        Every law is evaluated ``count`` times (default: the configured number
        of instances); the report lists pass/fail counts per law.
        """
        count = count or self.config.selfcheck_instances
        rng = np.random.default_rng(self.config.seed)
        outcomes: Dict[str, List[bool]] = {law: [] for law in SELFCHECK_LAWS}
        checks: Dict[str, Callable[[np.random.Generator], bool]] = {
            "construction_soundness": self._check_construction,
            "centre_law": self._check_centre_law,
            "regularity_consistency": self._check_regularity,
            "quadratic_cup_identity": self._check_cup_identity,
            "complex_square": self._check_complex,
            "action_laws": self._check_action,
            "coboundary_action": self._check_coboundary_action,
            "equivalence_round_trip": self._check_round_trip,
        }
        for instance in range(count):
            for law in SELFCHECK_LAWS:
                ok = checks[law](rng)
                if not ok:
                    logger.warning(f"Law {law} failed on instance {instance}")
                outcomes[law].append(ok)
        summary = summarize_checks(outcomes)
        passed = all(entry["failed"] == 0 for entry in summary.values())
        logger.info(f"Self-check on {count} instances: {'passed' if passed else 'FAILED'}")
        return {"seed": self.config.seed, "instances": count, "laws": summary, "passed": passed}

    @staticmethod
    def _check_construction(rng: np.random.Generator) -> bool:
        data = random_twofold(rng)
        g = build(data)
        return verify(g).passed and tuple(signature_of(g)) == algebra_signature(data)

    @staticmethod
    def _check_centre_law(rng: np.random.Generator) -> bool:
        return centre_law_holds(build(random_twofold(rng)))

    @staticmethod
    def _check_regularity(rng: np.random.Generator) -> bool:
        data = random_twofold(rng)
        return centre(build(data)).dim == data.l + regularity(data).nullity

    @staticmethod
    def _check_cup_identity(rng: np.random.Generator) -> bool:
        l = int(rng.integers(4, 6))
        rep = random_rep(rng, l, max_a=6)
        alpha = random_cochain(rng, rep, 2, density=0.5, bound=2)
        return check_ek(alpha) == cup_selfcheck(alpha)

    @staticmethod
    def _check_complex(rng: np.random.Generator) -> bool:
        l = int(rng.integers(2, 5))
        rep = random_rep(rng, l, max_a=6, lorentzian=bool(rng.random() < 0.5))
        degree = int(rng.integers(1, l))
        c = random_cochain(rng, rep, degree)
        return coboundary(coboundary(c)).is_zero()

    @staticmethod
    def _check_action(rng: np.random.Generator) -> bool:
        data = random_twofold(rng)
        rep = data.rep
        first, second = random_cochain(rng, rep, 1), random_cochain(rng, rep, 1)
        unchanged = act(data.alpha, data.gamma, Cochain.zero(rep, 1))
        stepwise = act(*act(data.alpha, data.gamma, first), second)
        combined = act(data.alpha, data.gamma, first + second)
        return (unchanged[0] == data.alpha and unchanged[1] == data.gamma
                and stepwise[0] == combined[0] and stepwise[1] == combined[1])

    @staticmethod
    def _check_coboundary_action(rng: np.random.Generator) -> bool:
        data = random_twofold(rng)
        rep = data.rep
        v = random_vector(rng, rep.a)
        tau = Cochain(rep, 1, {(j,): rep.rho[j] @ v for (j,) in increasing_tuples(rep.l, 1)})
        alpha, gamma = act(data.alpha, data.gamma, tau)
        return alpha == data.alpha and gamma == data.gamma

    @staticmethod
    def _check_round_trip(rng: np.random.Generator) -> bool:
        data = random_twofold(rng)
        tau = random_cochain(rng, data.rep, 1)
        alpha, gamma = act(data.alpha, data.gamma, tau)
        target = data.with_forms(alpha, gamma)
        witness = extension_equivalent(data, target)
        if witness is None:
            return False
        replay = act(data.alpha, data.gamma, witness.tau)
        if not (replay[0] == target.alpha and replay[1] == target.gamma):
            return False
        psi = psi_matrix(data.rep, witness.tau)
        return not verify_isomorphism(build(data), build(target), psi)
