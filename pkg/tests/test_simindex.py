"""Similarity measures, inverted-index kNN and SNN similarity."""

import numpy as np
import pytest
import scipy.sparse as sp
from hypothesis import given, settings
from hypothesis import strategies as st

from mathns.errors import LengthMismatch
from mathns.simindex import (
    COSINE,
    EUCLIDEAN,
    INNER,
    JACCARD,
    NeighborList,
    SimilarityIndex,
    ZeroVectorWarning,
    build_snn_graph,
    knn,
    similarity,
    snn_similarity,
)


def assert_same_topk(got, expected, tol: float = 1e-9):
    """Top-K equality up to float noise: scores must agree, and ids must
    agree exactly wherever scores are separated by more than ``tol``;
    inside a tie group only the id sets are compared."""
    got_scores = [s for _, s in got]
    exp_scores = [s for _, s in expected]
    np.testing.assert_allclose(got_scores, exp_scores, atol=tol)
    start = 0
    for k in range(1, len(expected) + 1):
        if k == len(expected) or abs(exp_scores[k] - exp_scores[k - 1]) > tol:
            assert {j for j, _ in got[start:k]} == {j for j, _ in expected[start:k]}
            start = k


def brute_force_knn(dense: np.ndarray, i: int, K: int, measure: str):
    """All-pairs oracle; same tie rule (score desc, id asc)."""
    scores = []
    for j in range(dense.shape[0]):
        if j == i:
            continue
        a, b = dense[i], dense[j]
        if measure == COSINE:
            na, nb = np.linalg.norm(a), np.linalg.norm(b)
            s = float(a @ b / (na * nb)) if na > 0 and nb > 0 else 0.0
            scores.append((-s, j))
        elif measure == INNER:
            scores.append((-float(a @ b), j))
        elif measure == JACCARD:
            x, y = a != 0, b != 0
            union = np.sum(x | y)
            s = float(np.sum(x & y) / union) if union else 0.0
            scores.append((-s, j))
        else:
            scores.append((float(np.linalg.norm(a - b)), j))
    scores.sort()
    return [(j, abs(s)) for s, j in scores[:K]]


class TestSimilarity:
    def test_cosine_self_unit(self):
        v = np.array([0.6, 0.8])
        assert similarity(COSINE, v, v) == pytest.approx(1.0)

    def test_jaccard_sets(self):
        a = np.array([1.0, 1.0, 0.0])
        b = np.array([0.0, 1.0, 1.0])
        assert similarity(JACCARD, a, b) == pytest.approx(1 / 3)

    def test_zero_vector_warns_and_returns_zero(self):
        with pytest.warns(ZeroVectorWarning):
            assert similarity(COSINE, np.zeros(3), np.ones(3)) == 0.0

    @given(st.integers(0, 2**32 - 1))
    def test_euclidean_cosine_identity(self, seed):
        rng = np.random.default_rng(seed)
        u = rng.standard_normal(8)
        v = rng.standard_normal(8)
        u /= np.linalg.norm(u)
        v /= np.linalg.norm(v)
        lhs = similarity(EUCLIDEAN, u, v) ** 2
        rhs = 2.0 * (1.0 - similarity(COSINE, u, v))
        assert lhs == pytest.approx(rhs, abs=1e-9)

    @given(st.integers(0, 2**32 - 1), st.sampled_from([COSINE, INNER, JACCARD, EUCLIDEAN]))
    def test_symmetry(self, seed, measure):
        rng = np.random.default_rng(seed)
        a = rng.uniform(0, 1, 6)
        b = rng.uniform(0, 1, 6)
        assert similarity(measure, a, b) == pytest.approx(similarity(measure, b, a))


class TestKnn:
    def test_identical_docs(self):
        X = sp.csr_matrix(np.ones((3, 4)))
        result = knn(X, 0, 2, COSINE)
        assert [s for _, s in result.neighbors] == pytest.approx([1.0, 1.0])

    def test_orthogonal_doc_fills_with_zero(self):
        X = sp.csr_matrix(np.array([[1.0, 0], [1.0, 0], [0, 1.0]]))
        result = knn(X, 2, 1, COSINE)
        assert result.neighbors == ((0, 0.0),)

    def test_k_must_be_below_n(self):
        X = sp.csr_matrix(np.eye(3))
        with pytest.raises(ValueError):
            knn(X, 0, 3, COSINE)

    def test_owner_not_in_neighbors(self):
        X = sp.csr_matrix(np.ones((4, 2)))
        result = knn(X, 1, 3, COSINE)
        assert 1 not in result.ids()

    @given(
        st.integers(0, 2**32 - 1),
        st.sampled_from([COSINE, INNER, JACCARD, EUCLIDEAN]),
    )
    @settings(max_examples=25)
    def test_property_matches_brute_force(self, seed, measure):
        rng = np.random.default_rng(seed)
        n = int(rng.integers(3, 15))
        X = sp.random(n, 6, density=0.4, random_state=int(rng.integers(1e6)), format="csr")
        dense = np.asarray(X.todense())
        index = SimilarityIndex(X, measure)
        K = int(rng.integers(1, n))
        for i in range(n):
            assert_same_topk(
                index.query(i, K).neighbors, brute_force_knn(dense, i, K, measure)
            )

    @pytest.mark.parametrize("measure", [COSINE, INNER, JACCARD, EUCLIDEAN])
    @pytest.mark.parametrize("seed", range(8))
    def test_matches_brute_force(self, measure, seed):
        rng = np.random.default_rng(seed)
        n = int(rng.integers(5, 21))
        X = sp.random(n, 10, density=0.4, random_state=int(rng.integers(1e6)), format="csr")
        dense = np.asarray(X.todense())
        index = SimilarityIndex(X, measure)
        K = int(rng.integers(1, n))
        for i in range(n):
            got = index.query(i, K).neighbors
            expected = brute_force_knn(dense, i, K, measure)
            assert_same_topk(got, expected)


class TestSnn:
    def nl(self, owner, ids):
        return NeighborList(owner, tuple((i, 1.0) for i in ids))

    def test_identical_lists(self):
        assert snn_similarity(self.nl(0, [1, 2, 3]), self.nl(4, [1, 2, 3])) == 3

    def test_disjoint_lists(self):
        assert snn_similarity(self.nl(0, [1, 2]), self.nl(3, [4, 5])) == 0

    def test_three_shared(self):
        p = self.nl(0, [1, 2, 3, 4])
        q = self.nl(5, [2, 3, 4, 6])
        assert snn_similarity(p, q) == 3

    def test_length_mismatch(self):
        with pytest.raises(LengthMismatch):
            snn_similarity(self.nl(0, [1]), self.nl(2, [1, 3]))

    def test_union_variant(self):
        p = self.nl(0, [1, 2, 3])
        q = self.nl(4, [2, 3, 5])
        assert snn_similarity(p, q, union=True) == 2 * 3 - 2

    @given(st.integers(0, 2**32 - 1))
    def test_bounded_by_k(self, seed):
        rng = np.random.default_rng(seed)
        K = int(rng.integers(1, 6))
        p = self.nl(0, rng.choice(20, size=K, replace=False).tolist())
        q = self.nl(1, rng.choice(20, size=K, replace=False).tolist())
        assert 0 <= snn_similarity(p, q) <= K


class TestSnnGraph:
    def test_two_identical_docs_k1(self):
        # n=2, K=1: each lists the other, so no shared neighbor exists
        X = sp.csr_matrix(np.ones((2, 3)))
        A = build_snn_graph(X, 1, COSINE)
        assert A[0, 1] == 0
        assert A[0, 0] == 1  # diagonal is K by convention

    def test_three_doc_trace(self):
        # p, q identical; r overlaps both. K=2: NN(p)={q,r}, NN(q)={p,r},
        # so p and q share exactly {r}.
        X = sp.csr_matrix(
            np.array([[1.0, 1.0, 0.0], [1.0, 1.0, 0.0], [1.0, 0.0, 1.0]])
        )
        A = build_snn_graph(X, 2, COSINE)
        assert A[0, 1] == 1

    def test_orthogonal_corpus_zero_offdiag(self):
        X = sp.csr_matrix(np.eye(4))
        A = build_snn_graph(X, 2, COSINE)
        dense = np.asarray(A.todense())
        off = dense - np.diag(np.diag(dense))
        # neighbors exist (zero-similarity fill), but they are assigned
        # by ascending doc id, so shared members still occur
        assert dense.shape == (4, 4)
        assert np.all(np.diag(dense) == 2)
        assert np.all(off >= 0)

    @pytest.mark.parametrize("seed", range(5))
    def test_matches_brute_force(self, seed):
        rng = np.random.default_rng(seed)
        n = 20
        X = sp.random(n, 8, density=0.5, random_state=seed, format="csr")
        K = 4
        A = build_snn_graph(X, K, COSINE)
        dense_X = np.asarray(X.todense())
        lists = [
            frozenset(j for j, _ in brute_force_knn(dense_X, i, K, COSINE))
            for i in range(n)
        ]
        for p in range(n):
            for q in range(n):
                expected = K if p == q else len(lists[p] & lists[q])
                assert A[p, q] == expected

    def test_symmetric(self):
        X = sp.random(15, 6, density=0.5, random_state=3, format="csr")
        A = build_snn_graph(X, 3, COSINE)
        assert (A != A.T).nnz == 0
