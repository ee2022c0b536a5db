"""
Core orchestrator for bnstructure commands

Every command of the CLI is a method here: the CLI parses flags, calls one
method and prints or writes what it returns.
"""

import logging
import math
from dataclasses import dataclass
from pathlib import Path
from typing import List, Optional, Sequence, Tuple, Union

import pandas as pd

from .config_manager import SimulationConfig
from .curves import DEFAULT_ALPHA_GRID, bayes_factor_curves
from .data import Dataset, count_family, nominal_parameter_count
from .enumeration import PriorCensus, census_uniform_prior
from .graph import Dag, arc_labels, structural_hamming_distance
from .io.bif import read_bif
from .io.tables import (
    ResultsTable,
    load_csv_dataset,
    load_schema,
    read_arc_list,
    read_results,
    read_structure,
)
from .model import Bn, fit, predictive_loglik, sample
from .priors import (
    log_graph_prior,
    uniform_arc_probability_approx,
    uniform_incident_correlation_approx,
)
from .scores import effective_params, local_scores
from .search import LearnConfig, SearchTrace, hill_climb
from .simulation import run_simulation, summarize_results
from .strategy import StrategyRegistry, strategy_label

logger = logging.getLogger(__name__)

PathLike = Union[str, Path]

SCORE_BREAKDOWN_COLUMNS = ["node", "parents", "local_score", "effective_params"]
CENSUS_ARC_COLUMNS = ["first", "second", "forward", "backward", "absent"]
CENSUS_CORRELATION_COLUMNS = ["first_pair", "second_pair", "shared_endpoint", "correlation"]


@dataclass
class ScoreReport:
    """Per-node breakdown of a structure's log score"""

    strategy: str
    breakdown: pd.DataFrame
    total: float
    log_prior: float

    @property
    def log_posterior(self) -> float:
        return self.total + self.log_prior


@dataclass
class LearnResult:
    strategy: str
    dag: Dag
    trace: SearchTrace
    names: List[str]
    fitted: Optional[Bn] = None


@dataclass
class CensusReport:
    """Uniform-prior census with the large-N approximations next to it"""

    census: PriorCensus
    arcs: pd.DataFrame
    correlations: pd.DataFrame
    approx_forward: float
    approx_absent: float
    approx_incident_correlation: float

    @property
    def mean_incident_correlation(self) -> float:
        values = list(self.census.incident_correlations().values())
        return sum(values) / len(values) if values else 0.0

    @property
    def max_disjoint_correlation(self) -> float:
        return max((abs(v) for v in self.census.disjoint_correlations().values()), default=0.0)


class BNStructureCore:
    """Core orchestrator for structure learning commands"""

    def __init__(self, registry: Optional[StrategyRegistry] = None):
        """
        Initialize the core orchestrator

        Args:
            registry: Strategy registry (creates a new one if not provided)
        """
        self.registry = registry or StrategyRegistry()

    def load_dataset(self, path: PathLike, schema_path: Optional[PathLike] = None) -> Dataset:
        schema = load_schema(schema_path) if schema_path else None
        data = load_csv_dataset(path, schema)
        logger.info(f"Loaded {data.n_rows} rows over {data.n_vars} variables from {path}")
        return data

    def load_structure(self, source: Optional[PathLike], data: Dataset) -> Dag:
        """Structure aligned with the dataset's columns; no source means no arcs"""
        if source is None:
            return Dag.empty(data.n_vars)
        return read_structure(source, data.names)

    def score(
        self,
        data: Dataset,
        dag: Dag,
        score_token: str = "bdeu:1",
        prior_token: str = "u",
    ) -> ScoreReport:
        """
        Log score of a structure, node by node

        Args:
            data: Dataset
            dag: Structure over the dataset's columns
            score_token: Score kind, e.g. ``bds:1``
            prior_token: Graph prior, e.g. ``mu:0.5``

        Returns:
            ScoreReport with local scores, their total and the log prior
        """
        kind = self.registry.parse_score(score_token)
        prior = self.registry.parse_prior(prior_token)
        logger.info(f"Scoring {dag.arc_count} arcs with {strategy_label(kind, prior)}")
        local = local_scores(dag, data, kind)
        rows = []
        for node, value in enumerate(local):
            parents = dag.parents[node]
            rows.append(
                {
                    "node": data.names[node],
                    "parents": " ".join(data.names[p] for p in parents),
                    "local_score": value,
                    "effective_params": effective_params(count_family(data, node, parents)),
                }
            )
        return ScoreReport(
            strategy=strategy_label(kind, prior),
            breakdown=pd.DataFrame(rows, columns=SCORE_BREAKDOWN_COLUMNS),
            total=float(sum(local)),
            log_prior=log_graph_prior(prior, dag),
        )

    def learn(
        self,
        data: Dataset,
        score_token: str = "bdeu:1",
        prior_token: str = "u",
        config: Optional[LearnConfig] = None,
        fit_alpha: Optional[float] = None,
    ) -> LearnResult:
        """
        Hill-climb a structure and optionally fit its parameters

        Args:
            data: Training data
            score_token: Score kind
            prior_token: Graph prior
            config: Search settings
            fit_alpha: When set, fit CPTs with this imaginary sample size

        Returns:
            LearnResult with the structure, the trace and the fitted network
        """
        kind = self.registry.parse_score(score_token)
        prior = self.registry.parse_prior(prior_token)
        dag, trace = hill_climb(data, kind, prior, config)
        logger.debug(f"Learned arcs: {', '.join(arc_labels(dag, data.names)) or 'none'}")
        fitted = fit(dag, data, fit_alpha) if fit_alpha is not None else None
        return LearnResult(strategy_label(kind, prior), dag, trace, data.names, fitted)

    def bayes_factors(
        self,
        data: Dataset,
        g_plus: PathLike,
        g_minus: PathLike,
        alpha_grid: Optional[Sequence[float]] = None,
    ) -> pd.DataFrame:
        plus = self.load_structure(g_plus, data)
        minus = self.load_structure(g_minus, data)
        return bayes_factor_curves(data, plus, minus, alpha_grid or DEFAULT_ALPHA_GRID)

    def shd(
        self,
        first: PathLike,
        second: PathLike,
        extra_nodes: Sequence[str] = (),
        dag_level: bool = False,
    ) -> int:
        """
        Structural Hamming distance between two stored structures

        Node names come from a BIF when one is given, otherwise from the arc
        endpoints of both lists plus ``extra_nodes`` for isolated nodes.
        """
        names = self._structure_names([Path(first), Path(second)], extra_nodes)
        a = read_structure(first, names)
        b = read_structure(second, names)
        distance = structural_hamming_distance(a, b, dag_level=dag_level)
        logger.info(f"SHD over {len(names)} nodes: {distance}")
        return distance

    @staticmethod
    def _structure_names(paths: Sequence[Path], extra_nodes: Sequence[str]) -> List[str]:
        for path in paths:
            if path.suffix.lower() == ".bif":
                return read_bif(path).names
        names: List[str] = []
        for path in paths:
            for arc in read_arc_list(path):
                names.extend(name for name in arc if name not in names)
        names.extend(name for name in extra_nodes if name not in names)
        return names

    def sample(self, bif_path: PathLike, n: int, seed: int = 0) -> Dataset:
        bn = read_bif(bif_path)
        logger.info(f"Sampling {n} rows from {bif_path} with seed {seed}")
        return sample(bn, n, seed=seed)

    def predict(self, bif_path: PathLike, test_path: PathLike) -> Tuple[float, int]:
        """
        Log-likelihood of a test CSV under a network

        Test levels are checked against the network's declared levels and its
        columns are reordered to the network's variable order.

        Returns:
            Tuple of (total log-likelihood, number of rows)
        """
        bn = read_bif(bif_path)
        schema = {v.name: list(v.levels) for v in bn.variables}
        test = load_csv_dataset(test_path, schema)
        if test.names != bn.names:
            test = test.select(bn.names)
        return predictive_loglik(bn, test), test.n_rows

    def census(self, n_nodes: int) -> CensusReport:
        census = census_uniform_prior(n_nodes)
        arcs = pd.DataFrame(
            [
                (i, j, float(census.arc_forward_prob[(i, j)]),
                 float(census.arc_backward_prob[(i, j)]),
                 float(census.arc_absent_prob[(i, j)]))
                for i, j in sorted(census.arc_forward_prob)
            ],
            columns=CENSUS_ARC_COLUMNS,
        )
        correlations = pd.DataFrame(
            [
                (f"{a[0]}-{a[1]}", f"{b[0]}-{b[1]}", bool(set(a) & set(b)), value)
                for (a, b), value in sorted(census.arc_pair_correlation.items())
            ],
            columns=CENSUS_CORRELATION_COLUMNS,
        )
        if n_nodes > 1:
            forward, absent = uniform_arc_probability_approx(n_nodes)
            incident = uniform_incident_correlation_approx(n_nodes)
        else:
            forward, absent, incident = math.nan, math.nan, math.nan
        return CensusReport(census, arcs, correlations, forward, absent, incident)

    def simulate(self, config: SimulationConfig) -> ResultsTable:
        return run_simulation(config, self.registry)

    def summarize(self, results_path: PathLike) -> pd.DataFrame:
        return summarize_results(read_results(results_path))

    def parameter_count(self, bif_path: PathLike) -> int:
        bn = read_bif(bif_path)
        return nominal_parameter_count(bn.variables, bn.dag)
