"""
Unit tests for parameterised networks: fitting, sampling and prediction
"""

import math

import numpy as np
import pytest

from bnstructure.data import Dataset, Variable, merge_datasets
from bnstructure.errors import DimensionMismatchError, OutOfRangeError, SchemaMismatchError
from bnstructure.graph import Dag
from bnstructure.io import parse_bif
from bnstructure.model import (
    Bn,
    Cpt,
    expected_loglik,
    fit,
    make_generator,
    predictive_loglik,
    random_sparse_bn,
    sample,
)

from fixtures import CHAIN_BIF, UNIFORM_SINGLE_NODE_BIF

X, Z, W, Y = 0, 1, 2, 3


class TestCpt:
    """Test cases for conditional probability tables"""

    def test_rows_normalised(self):
        """Test rows within tolerance are renormalised and frozen"""
        cpt = Cpt(2, (2,), np.array([[0.25, 0.75], [1.0, 0.0]]))
        assert cpt.config_count == 2
        assert cpt.table.sum(axis=1).tolist() == [1.0, 1.0]
        with pytest.raises(ValueError):
            cpt.table[0, 0] = 0.5

    def test_bad_rows(self):
        """Test rows that do not sum to one or hold negatives"""
        with pytest.raises(OutOfRangeError, match="sums to"):
            Cpt(2, (), np.array([[0.5, 0.6]]))
        with pytest.raises(OutOfRangeError):
            Cpt(2, (), np.array([[1.5, -0.5]]))

    def test_shape(self):
        """Test the table must have q rows and r columns"""
        with pytest.raises(DimensionMismatchError):
            Cpt(2, (3,), np.full((2, 2), 0.5))

    def test_uniform(self):
        """Test the uniform table"""
        cpt = Cpt.uniform(4, [2, 3])
        assert cpt.table.shape == (6, 4)
        assert np.all(cpt.table == 0.25)

    def test_network_checks_families(self):
        """Test tables must match the family cardinalities"""
        variables = (Variable("A", ("0", "1")), Variable("B", ("0", "1", "2")))
        dag = Dag.from_arcs(2, [(0, 1)])
        with pytest.raises(DimensionMismatchError):
            Bn(dag, variables, (Cpt.uniform(2, []), Cpt.uniform(3, [3])))
        bn = Bn(dag, variables, (Cpt.uniform(2, []), Cpt.uniform(3, [2])))
        assert bn.names == ["A", "B"]


class TestSampling:
    """Test cases for ancestral sampling"""

    def test_deterministic_by_seed(self):
        """Test the same seed reproduces the same rows"""
        bn = parse_bif(CHAIN_BIF)
        a = sample(bn, 200, seed=5)
        b = sample(bn, 200, seed=5)
        c = sample(bn, 200, seed=6)
        assert np.array_equal(a.rows, b.rows)
        assert not np.array_equal(a.rows, c.rows)

    def test_streams_are_independent(self):
        """Test stream components change the generator"""
        first = make_generator(1, 2).random(5)
        second = make_generator(1, 3).random(5)
        assert not np.array_equal(first, second)
        assert np.array_equal(first, make_generator(1, 2).random(5))

    def test_seed_range(self):
        """Test seeds outside 64 bits are refused"""
        with pytest.raises(OutOfRangeError):
            make_generator(-1)
        with pytest.raises(OutOfRangeError):
            make_generator(2**64)

    def test_frequencies(self):
        """Test marginal and conditional frequencies follow the tables"""
        bn = parse_bif(CHAIN_BIF)
        data = sample(bn, 20000, seed=11)
        a_yes = data.rows[:, 0] == 0
        assert a_yes.mean() == pytest.approx(0.3, abs=0.02)
        b_low_given_no = (data.rows[~a_yes, 1] == 0).mean()
        assert b_low_given_no == pytest.approx(0.6, abs=0.02)

    def test_sizes(self):
        """Test empty and negative sample sizes"""
        bn = parse_bif(UNIFORM_SINGLE_NODE_BIF)
        assert sample(bn, 0).n_rows == 0
        with pytest.raises(OutOfRangeError):
            sample(bn, -1)

    def test_variables_carried_over(self):
        """Test samples use the network's variables"""
        bn = parse_bif(CHAIN_BIF)
        assert sample(bn, 3, seed=1).variables == bn.variables


class TestPrediction:
    """Test cases for predictive log-likelihood"""

    def test_uniform_single_node(self):
        """Test ten rows under a fair coin"""
        bn = parse_bif(UNIFORM_SINGLE_NODE_BIF)
        test = Dataset.from_labels(["A"], [["a0"]] * 4 + [["a1"]] * 6, {"A": ["a0", "a1"]})
        assert predictive_loglik(bn, test) == pytest.approx(-6.9315, abs=1e-4)

    def test_schema_mismatch(self):
        """Test test data must share variables and levels"""
        bn = parse_bif(UNIFORM_SINGLE_NODE_BIF)
        test = Dataset.from_labels(["A"], [["x"]], {"A": ["x", "y"]})
        with pytest.raises(SchemaMismatchError):
            predictive_loglik(bn, test)

    def test_impossible_row(self):
        """Test a zero-probability row gives minus infinity"""
        variables = (Variable("A", ("0", "1")),)
        bn = Bn(Dag.empty(1), variables, (Cpt(2, (), np.array([[1.0, 0.0]])),))
        test = Dataset(variables, np.array([[1]]))
        assert predictive_loglik(bn, test) == -math.inf

    def test_expected_loglik(self):
        """Test exact expectation against a fair coin and a large sample"""
        assert expected_loglik(parse_bif(UNIFORM_SINGLE_NODE_BIF)) == pytest.approx(math.log(0.5))
        bn = parse_bif(CHAIN_BIF)
        data = sample(bn, 50000, seed=2)
        assert predictive_loglik(bn, data) / data.n_rows == pytest.approx(
            expected_loglik(bn), abs=0.02
        )

    def test_additive_over_disjoint_sets(self):
        """Test the log-likelihood of a union is the sum over its parts"""
        bn = parse_bif(CHAIN_BIF)
        first = sample(bn, 300, seed=5)
        second = sample(bn, 200, seed=6)
        both = merge_datasets(first, second)
        assert predictive_loglik(bn, both) == pytest.approx(
            predictive_loglik(bn, first) + predictive_loglik(bn, second), rel=1e-12
        )
        split = both.rows.shape[0] // 3
        head = Dataset(both.variables, both.rows[:split])
        tail = Dataset(both.variables, both.rows[split:])
        assert predictive_loglik(bn, both) == pytest.approx(
            predictive_loglik(bn, head) + predictive_loglik(bn, tail), rel=1e-12
        )


class TestFit:
    """Test cases for Dirichlet posterior fitting"""

    def test_bdeu_estimates(self, sparse_and_data):
        """Test posterior means with alpha spread over all configurations"""
        dag = Dag.from_arcs(4, [(Z, X), (W, X)])
        bn = fit(dag, sparse_and_data, alpha=1.0)
        assert bn.cpts[X].table[0, 0] == pytest.approx((1 / 8 + 2) / (1 / 4 + 3))

    def test_unobserved_rows_uniform(self, sparse_and_data):
        """Test configurations never seen get uniform rows"""
        dag = Dag.from_arcs(4, [(Z, X), (W, X), (Y, X)])
        bn = fit(dag, sparse_and_data, alpha=1.0)
        assert bn.cpts[X].table[1].tolist() == [0.5, 0.5]
        assert bn.cpts[X].table[0, 0] == pytest.approx((1 / 16 + 2) / (1 / 8 + 3))

    def test_bds_mode(self, sparse_and_data):
        """Test alpha spread over observed configurations only"""
        dag = Dag.from_arcs(4, [(Z, X), (W, X), (Y, X)])
        bn = fit(dag, sparse_and_data, alpha=1.0, mode="bds")
        assert bn.cpts[X].table[0, 0] == pytest.approx((1 / 8 + 2) / (1 / 4 + 3))

    def test_consistent_on_large_samples(self):
        """Test fitted tables approach the generating ones as n grows"""
        variables = tuple(Variable(name, ("0", "1")) for name in ("A", "B", "C"))
        dag = Dag.from_arcs(3, [(0, 1), (1, 2)])
        cpts = (
            Cpt(2, (), np.array([[0.3, 0.7]])),
            Cpt(2, (2,), np.array([[0.2, 0.8], [0.6, 0.4]])),
            Cpt(2, (2,), np.array([[0.9, 0.1], [0.25, 0.75]])),
        )
        truth = Bn(dag, variables, cpts)
        errors = []
        for n in (500, 50000):
            fitted = fit(dag, sample(truth, n, seed=11), alpha=1.0)
            errors.append(
                max(float(np.max(np.abs(a.table - b.table))) for a, b in zip(fitted.cpts, truth.cpts))
            )
        assert errors[1] < 0.05
        assert errors[1] < errors[0]

    def test_invalid_arguments(self, sparse_and_data):
        """Test alpha, mode and dimensions are checked"""
        with pytest.raises(OutOfRangeError):
            fit(Dag.empty(4), sparse_and_data, alpha=0.0)
        with pytest.raises(OutOfRangeError):
            fit(Dag.empty(4), sparse_and_data, mode="mle")
        with pytest.raises(DimensionMismatchError):
            fit(Dag.empty(3), sparse_and_data)


class TestRandomSparseBn:
    """Test cases for synthetic reference networks"""

    def test_shape(self):
        """Test node, arc and level counts"""
        bn = random_sparse_bn(10, 12, seed=1, cardinality=3)
        assert bn.node_count == 10
        assert bn.dag.arc_count == 12
        assert bn.names[0] == "V1"
        assert bn.variables[0].levels == ("s0", "s1", "s2")
        assert all(np.all(cpt.table > 0) for cpt in bn.cpts)

    def test_deterministic(self):
        """Test the same seed gives the same network"""
        a = random_sparse_bn(6, 5, seed=4)
        b = random_sparse_bn(6, 5, seed=4)
        assert a.dag == b.dag
        assert all(np.array_equal(x.table, y.table) for x, y in zip(a.cpts, b.cpts))

    def test_limits(self):
        """Test impossible arc counts and cardinalities"""
        with pytest.raises(OutOfRangeError):
            random_sparse_bn(3, 4)
        with pytest.raises(OutOfRangeError):
            random_sparse_bn(3, 1, cardinality=1)
