"""
Experiment pipelines behind the CLI subcommands

Each pipeline takes a resolved ExperimentConfig and returns an
ExperimentOutcome: a console summary plus a sorted table and/or a JSON
document. Writing is left to the caller.
"""

import logging
import math
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional

import numpy as np
import pandas as pd

from config.settings import (
    BERNOULLI_CSV_HEADERS, GATE_CSV_HEADERS, ISING_CSV_HEADERS, REPETITION_CSV_HEADERS,
    SEARCH_CSV_HEADERS, ZNE_CSV_HEADERS,
)
from ..models.experiment import ExperimentConfig
from ..models.noise import ShotModel
from ..models.resources import GATE_KINDS, GateCostTable, ScalingQuery
from ..models.sequence import ExpectationRecord, ExponentSequence, format_fraction
from ..utils.errors import InvalidInputError
from ..utils.helpers import (
    parse_base, parse_float_list, parse_int_list, parse_range, parse_sequence_list, parse_symmetric
)
from ..utils.validators import (
    validate_exponents, validate_probability, validate_search_range, validate_tolerance
)
from .artifact_writer import ArtifactWriter
from .hamiltonians import build_ising, initial_state, magnetization, product_state
from .mpf_engine import combine_expectations, scale_sequence, search_sequences, solve_weights
from .noise_lab import bernoulli_mpf_demo, inject_perturbation, zne_round_trip
from .propagators import Propagator, empirical_order
from .resource_estimator import cnot_comparison, mpf_depth_scaling, repetition_table

# Predicted median of |N(0, 1)|
HALF_NORMAL_MEDIAN = 0.6744897501960817


@dataclass
class ExperimentOutcome:
    """Summary for the console plus the artifacts of one run"""
    summary: Dict[str, Any] = field(default_factory=dict)
    table: Optional[pd.DataFrame] = None
    document: Optional[Dict[str, Any]] = None


def _check(result: tuple) -> None:
    is_valid, error_msg = result
    if not is_valid:
        raise InvalidInputError(error_msg)


def _sequence(k, base_chi: int, symmetric=None) -> ExponentSequence:
    k = parse_int_list(k) if isinstance(k, str) else tuple(k)
    _check(validate_exponents(k))
    return ExponentSequence(k, base_chi, symmetric)


class ExperimentRunner:
    """
    Main pipeline class: one method per subcommand
    """

    def __init__(self, writer: Optional[ArtifactWriter] = None):
        self.writer = writer or ArtifactWriter()
        self.logger = logging.getLogger(__name__)

    def run(self, config: ExperimentConfig) -> ExperimentOutcome:
        pipelines = {
            "weights": self.weights,
            "ising-demo": self.ising_demo,
            "bernoulli-demo": self.bernoulli_demo,
            "zne-demo": self.zne_demo,
            "lcu-cost": self.lcu_cost,
            "scaling": self.scaling,
            "search": self.search,
            "repetitions": self.repetitions,
        }
        if config.experiment not in pipelines:
            raise InvalidInputError(f"Unknown experiment '{config.experiment}'")
        self.logger.info(f"Running {config.experiment} (seed {config.seed})")
        return pipelines[config.experiment](config)

    def weights(self, config: ExperimentConfig) -> ExperimentOutcome:
        seq = _sequence(config["k"], parse_base(config["base"]), parse_symmetric(config["symmetric"]))
        w = solve_weights(seq)
        document = w.to_dict()
        return ExperimentOutcome(
            summary={"sequence": str(seq), "weights": ", ".join(document["weights"]), "norm1": w.norm1},
            document=document,
        )

    def ising_demo(self, config: ExperimentConfig) -> ExperimentOutcome:
        """
        Local magnetization of an Ising chain: S_1 sweep, well- and
        ill-conditioned MPFs, each with and without a sign-aligned perturbation
        """
        n_spins = config["n_spins"]
        t = config["t"]
        H = build_ising(n_spins, config["J"], config["h"])
        if config["observable"] == "z0":
            observable = magnetization(n_spins, 0)
        elif config["observable"] == "z_avg":
            observable = magnetization(n_spins, None)
        else:
            raise InvalidInputError(f"Unknown observable '{config['observable']}', expected z0 or z_avg")
        if config["tilt"]:
            psi = product_state(n_spins, config["tilt"])
        else:
            psi = initial_state(H, config["initial_state"])
        propagator = Propagator(H)

        exact = propagator.exact_expectation(t, psi, observable)
        cache: Dict[int, float] = {}

        def value_at(k: int) -> float:
            if k not in cache:
                cache[k] = propagator.pf_expectation(t, k, 1, psi, observable)
            return cache[k]

        def row(kind: str, label: str, k_max: int, norm1: float, eps: float, value: float) -> Dict:
            error = abs(value - exact)
            return {
                "kind": kind, "sequence": label, "k_max": k_max, "norm1": norm1,
                "epsilon_prime": eps, "value": value, "abs_error": error,
                "rel_error": error / abs(exact) if exact != 0 else float("nan"),
            }

        rows = [row("exact", "exact", 0, 1.0, 0.0, exact)]
        ks = list(range(1, config["max_k"] + 1))
        for k in ks:
            rows.append(row("pf", str(k), k, 1.0, 0.0, value_at(k)))

        groups = [("mpf-well", config["well_conditioned"]), ("mpf-ill", config["ill_conditioned"])]
        for kind, spec in groups:
            for k in parse_sequence_list(spec):
                seq = _sequence(k, 1)
                if config["alpha"] != 1.0:
                    seq = scale_sequence(seq, config["alpha"])
                w = solve_weights(seq)
                for eps in sorted({0.0, config["eps_prime"]}):
                    records = [
                        ExpectationRecord(k_j, inject_perturbation(value_at(k_j), float(a), eps), epsilon_prime=eps)
                        for a, k_j in zip(w.weights, seq.k)
                    ]
                    rows.append(row(kind, str(seq), seq.k_max, w.norm1, eps, combine_expectations(w, records)))

        pf_errors = [abs(value_at(k) - exact) for k in ks]
        order = empirical_order(ks, pf_errors) if len(ks) > 1 and min(pf_errors) > 1e-14 else float("nan")
        table = self.writer.build_table(rows, ISING_CSV_HEADERS, ["kind", "k_max", "sequence", "epsilon_prime"])
        return ExperimentOutcome(
            summary={"exact": exact, "pf_order": order, "rows": len(table)},
            table=table,
        )

    def bernoulli_demo(self, config: ExperimentConfig) -> ExperimentOutcome:
        """Sampling-noise amplification of k_j = j MPFs on Bernoulli data"""
        p = config["p"]
        _check(validate_probability(p))
        base_chi = parse_base(config["base"])
        samples = parse_int_list(config["samples"])
        repeats = config["repeats"]
        if repeats < 1:
            raise InvalidInputError(f"Repeat count must be positive, got {repeats}")

        rows = []
        for l in range(1, config["l_max"] + 1):
            w = solve_weights(ExponentSequence(tuple(range(1, l + 1)), base_chi))
            for M in samples:
                errors = [
                    bernoulli_mpf_demo(p, M, l, base_chi, config.seed, w.weights, repeat=r).error
                    for r in range(repeats)
                ]
                rows.append({
                    "l": l,
                    "base": config["base"],
                    "norm1": w.norm1,
                    "samples": M,
                    "repeats": repeats,
                    "median_error": float(np.median(errors)),
                    "mean_error": float(np.mean(errors)),
                    "predicted_median": HALF_NORMAL_MEDIAN * w.norm2 * math.sqrt(p * (1 - p) / M),
                    "bound": w.norm1 * 0.5 / math.sqrt(M),
                })
        table = self.writer.build_table(rows, BERNOULLI_CSV_HEADERS, ["samples", "l"])
        return ExperimentOutcome(summary={"rows": len(table), "l_max": config["l_max"]}, table=table)

    def zne_demo(self, config: ExperimentConfig) -> ExperimentOutcome:
        """Synthetic exponential-decay data, fitted and extrapolated per repeat"""
        if config["points"] < 4:
            raise InvalidInputError(f"ZNE needs at least 4 stretch points, got {config['points']}")
        if config["c_min"] <= 0 or config["c_max"] <= config["c_min"]:
            raise InvalidInputError("Stretch factors need 0 < c_min < c_max")
        stretches = np.linspace(config["c_min"], config["c_max"], config["points"])
        model = ShotModel(config["shots"], config.seed)

        rows: List[Dict] = []
        errors = []
        for repeat in range(config["repeats"]):
            curve = zne_round_trip(config["e_ideal"], config["b"], config["d"], stretches, model, repeat)
            errors.append(abs(curve.extrapolated - config["e_ideal"]))
            for c, y in curve.points:
                rows.append({"repeat": repeat, "kind": "point", "stretch": c, "value": y})
            rows.append({
                "repeat": repeat, "kind": "fit", "stretch": 0.0, "value": curve.extrapolated,
                "a": curve.a, "b": curve.b, "d": curve.d,
            })
        table = self.writer.build_table(rows, ZNE_CSV_HEADERS, ["repeat", "kind", "stretch"])
        return ExperimentOutcome(
            summary={
                "repeats": config["repeats"],
                "median_error": float(np.median(errors)) if errors else float("nan"),
                "max_error": max(errors) if errors else float("nan"),
            },
            table=table,
        )

    def lcu_cost(self, config: ExperimentConfig) -> ExperimentOutcome:
        k = parse_int_list(config["k"])
        _check(validate_exponents(k))
        costs = GateCostTable()
        comparison = cnot_comparison(k, config["n_spins"], costs)
        rows = [
            {"gate": kind, "cnots": costs.cost(kind), "lcu": lcu, "classical": classical}
            for kind, (lcu, classical) in comparison.multiplicities.items()
        ]
        document = comparison.to_dict()
        document["gates"] = {kind: list(comparison.multiplicities[kind]) for kind in GATE_KINDS}
        return ExperimentOutcome(
            summary={"lcu": comparison.lcu, "classical": comparison.classical, "ratio": comparison.ratio},
            table=self.writer.build_table(rows, GATE_CSV_HEADERS, ["gate"]),
            document=document,
        )

    def scaling(self, config: ExperimentConfig) -> ExperimentOutcome:
        _check(validate_tolerance(config["eps"]))
        query = ScalingQuery(config["nq"], config["eps"], config["t"])
        result = mpf_depth_scaling(query, config["alpha"] or None)
        document = result.to_dict()
        return ExperimentOutcome(summary=dict(document), document=document)

    def search(self, config: ExperimentConfig) -> ExperimentOutcome:
        l = config["l"]
        k_min, k_max = parse_range(config["range"])
        _check(validate_search_range(k_min, k_max, l))
        result = search_sequences(
            l=l,
            base_chi=parse_base(config["base"]),
            symmetric=parse_symmetric(config["symmetric"]),
            k_range=(k_min, k_max),
            threshold=config["threshold"] or None,
            objective=config["objective"],
            workers=config["workers"],
            limit=config["limit"] or None,
        )
        rows = [
            {
                "rank": ranked.rank,
                "sequence": str(ranked.sequence),
                "k_max": ranked.sequence.k_max,
                "norm1": ranked.weights.norm1,
                "norm1_exact": format_fraction(ranked.weights.norm1_exact),
                "weights": " ".join(format_fraction(a) for a in ranked.weights.weights),
            }
            for ranked in result.candidates
        ]
        summary = {"evaluated": result.evaluated, "accepted": result.accepted}
        if result.best is not None:
            summary["best"] = str(result.best.sequence)
        if result.diagnostic:
            summary["diagnostic"] = result.diagnostic
        return ExperimentOutcome(
            summary=summary,
            table=self.writer.build_table(rows, SEARCH_CSV_HEADERS, ["rank"]),
            document={"diagnostic": result.diagnostic, "candidates": [r.weights.to_dict() for r in result.candidates]},
        )

    def repetitions(self, config: ExperimentConfig) -> ExperimentOutcome:
        models = [tuple(model) for model in parse_sequence_list(config["models"])]
        if any(len(model) != 2 for model in models):
            raise InvalidInputError(f"Models must be 'M,n_max' pairs separated by ';', got '{config['models']}'")
        eps_values = parse_float_list(config["eps"])
        for eps in eps_values:
            _check(validate_tolerance(eps))
        results = repetition_table(
            models,
            eps_values,
            parse_int_list(config["orders"]),
            t=config["t"],
            metric=config["metric"],
            omega=config["omega"],
            omega_s=config["omega_s"],
            delta=config["delta"],
            g=config["g"],
        )
        rows = [
            {column: getattr(result, column) for column in REPETITION_CSV_HEADERS}
            for result in results
        ]
        table = self.writer.build_table(rows, REPETITION_CSV_HEADERS, ["modes", "n_max", "eps_t", "order"])
        return ExperimentOutcome(summary={"cells": len(table)}, table=table)
